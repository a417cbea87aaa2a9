"""Independent high-precision evaluation of the closed forms frozen into the C++ tests.

Run with: python3 tests/oracles/derive_values.py
Uses mpmath only; shares no code with the C++ engines.
"""
from fractions import Fraction
import mpmath as mp

mp.mp.dps = 80

N = 8
t_raw = {n: mp.mpf(2) ** (-(2 ** n)) for n in range(1, N + 1)}
R = sum(t_raw.values())
t = {n: t_raw[n] / R for n in t_raw}          # sphere mass at radius 1/n
pos = {n: t[n] / n for n in t}                 # mass of +1/n
neg = {n: t[n] * (n - 1) / n for n in t}       # mass of -1/n


def inner(n):   # open ball B_{1/n}: spheres k > n
    return sum((t[k] for k in t if k > n), mp.mpf(0))


def outer(n):   # exterior of closed ball: spheres k < n
    return sum((t[k] for k in t if k < n), mp.mpf(0))


def isimin_error(m):
    return sum(((1 - inner(n)) ** m - (1 - inner(n) - t[n]) ** m) / n for n in t)


def positive_pref_error(m):
    # at least one +1/n sample on the nearest sphere
    return sum((1 - inner(n)) ** m - (1 - inner(n) - pos[n]) ** m for n in t)


def bernoulli_error(m, C):
    total = mp.mpf(0)
    for n in t:
        q = outer(n)
        p_n = min(mp.mpf(C - 1) / n, 1 - mp.mpf(2) ** -30)
        only_pos = (q + pos[n]) ** m - q ** m
        both = (q + t[n]) ** m - (q + pos[n]) ** m - (q + neg[n]) ** m + q ** m
        total += only_pos + p_n * both
    return total


print("R =", mp.nstr(R, 15))
print("weight(+1/2) in B_1/2-normalized:", mp.nstr(pos[2] / (1 - outer(2)), 12))
print("sphere mass r=1:", mp.nstr(t[1], 12))
print("closed ball r=1/2:", mp.nstr(1 - outer(2), 12))
print("open ball r=1/2:", mp.nstr(inner(2), 12))
print("P(NN dist=1/2), m=10:", mp.nstr((1 - inner(2)) ** 10 - (1 - inner(2) - t[2]) ** 10, 12))
for m in [10, 243, 82932]:
    print("positive-pref error m=%d:" % m, mp.nstr(positive_pref_error(m), 12),
          " (1/2)(1-2/m)^(m-1) =", mp.nstr(mp.mpf(1) / 2 * (1 - mp.mpf(2) / m) ** (m - 1), 8))
print("1/(4e^2) =", mp.nstr(1 / (4 * mp.e ** 2), 12))
for m in [100, 10 ** 4, 10 ** 6]:
    print("bernoulli C=2 error m=%d:" % m, mp.nstr(bernoulli_error(m, 2), 12))
for m in [1, 10, 100, 1000, 10 ** 4, 10 ** 5, 10 ** 6]:
    print("isimin error m=%d:" % m, mp.nstr(isimin_error(m), 12))
num = sum(pos[k] for k in t if k >= 2)
den = 1 - outer(2)
print("ratio closed r=1/2:", mp.nstr(num / den, 12))
print("M_1/2(1/2):", mp.nstr(mp.sqrt(num * den), 12), " num:", mp.nstr(num, 10))
print("M_1/2(1):", mp.nstr(mp.sqrt(sum(pos.values())), 12),
      " m1 =", mp.ceil(1 / mp.sqrt(sum(pos.values()))))
print("E|eta| (m=1):", mp.nstr(sum(pos.values()), 12))

th = lambda n: mp.mpf(2) ** (-(2 ** n))
D = 3
def F(r):  # int_0^r eta
    s = mp.mpf(0)
    for n in range(1, D + 1):
        lo, hi = th(2 * n), th(2 * n - 1)
        s += max(mp.mpf(0), min(r, hi) - lo) if r > lo else 0
    return s
for n in range(1, 2 * D + 1):
    print("dyadic ratio at theta_%d:" % n, mp.nstr(F(th(n)) / th(n), 15))
print("dyadic int_0^theta2:", mp.nstr(F(th(2)), 20))

# two-atom classification model
p = [Fraction(1, 2), Fraction(1, 2)]
eta = [Fraction(3, 10), Fraction(4, 5)]
sur = 2 * sum(pi * e * (1 - e) for pi, e in zip(p, eta))
bay = sum(pi * min(e, 1 - e) for pi, e in zip(p, eta))
risk1 = sum(p[i] * p[j] * (eta[i] * (1 - eta[j]) + (1 - eta[i]) * eta[j]) for i in range(2) for j in range(2))
bound1 = sum(p[i] * p[j] * abs(eta[i] - eta[j]) for i in range(2) for j in range(2))
print("surrogate", sur, float(sur), "bayes", bay, float(bay), "risk m=1", risk1, float(risk1), "bound m=1", bound1)
def risk(m):
    tot = Fraction(0)
    for i in range(2):
        j = 1 - i
        miss = Fraction(1, 2) ** m
        tot += p[i] * ((1 - miss) * 2 * eta[i] * (1 - eta[i]) + miss * (eta[i] * (1 - eta[j]) + (1 - eta[i]) * eta[j]))
    return tot
print("risk m=64 - surrogate:", float(risk(64) - sur))
