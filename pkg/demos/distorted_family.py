"""Walk through the distorted C(p) family: the C(p) check, where C'(1/6)
breaks, the short words for b^(2^n), and a witness package at N = 30."""

from fractions import Fraction

from smallcancel.conditions import check_c_classical, check_cprime_classical
from smallcancel.distortion import gen_distorted_family, short_witness_length
from smallcancel.fileio import format_word
from smallcancel.witness import select_witnesses_classical, verify_classical

p = 7
pres = gen_distorted_family(p, 5)
print("r_1 =", format_word(pres.relators[0]))
print(f"C({p}) on N=5:", check_c_classical(pres, p).passed)

for N in (1, 4, 8):
    rep = check_cprime_classical(gen_distorted_family(p, N), Fraction(1, 6))
    w = rep.witness
    print(f"C'(1/6) at N={N}: passed={rep.passed}",
          f"piece {w['piece_length']} of {w['cycle_length']}" if w else "")

print("\n n   |u_n|   2^n")
for n in range(1, 13):
    print(f"{n:2d} {short_witness_length(p, n):6d} {2 ** n:6d}")

big = gen_distorted_family(p, 30)
pkg = select_witnesses_classical(big)
print("\nwitness tuples:", pkg.tuples[:4], "...")
print("verified:", verify_classical(big, pkg).ok, "|W1| =", len(pkg.W1), "|W2| =", len(pkg.W2))
