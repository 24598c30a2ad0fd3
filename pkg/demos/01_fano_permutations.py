"""Antilinear permutations of Z_2^3 and their Fano normal form."""

# %%
from trifam import antilinear as al
from trifam import gf2

p = al.parse_perm("(1234)")
print("images:", p.images)
print("antilinear:", al.is_antilinear(p))

# %% the line orthogonal to x sums to sigma(x); here that is 4, 6, 2, 5, 1, 3, 7
for x, s in zip(range(1, 8), al.line_sums(p)):
    line = [y for y in gf2.orth(x) if y]
    print(f"x={x}  line={line}  sum={s}")

# %% the signature is linear, so three values pin it down
sigma = al.signature(p)
print("signature:", sigma, " regular:", gf2.is_regular(sigma))

# %% strip off the linear part and what is left has identity signature
L, phi = al.factorize(p)
print("p = L after", al.to_cycles(phi), " fano:", al.is_fano(phi))

# %% eight Fano permutations, 168 linear maps, 1344 antilinear permutations
fano = al.enumerate_fano()
print([al.to_cycles(f) for f in fano])
print(len(gf2.enumerate_regular(3)), "x", len(fano), "=", len(al.enumerate_antilinear()))

# %% two checks every Fano permutation passes
ok1 = all(gf2.inner(x, f(x)) == 1 for f in fano for x in range(1, 8))
ok2 = all(al.check_orth_pair(f, x, y) == 1 for f in fano for x in range(1, 8) for y in range(x + 1, 8))
print("<x, p(x)> = 1:", ok1, "  <x, p(y)> + <y, p(x)> = 1:", ok2)
