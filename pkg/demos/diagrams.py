"""Curvature audits on spheres, and folding a disk diagram down to a
cyclically reduced boundary."""

import random

from smallcancel.diagram import (cap_off, curvature_audit, fold_until_reduced, icosahedron,
                                 random_disk, random_sphere)
from smallcancel.fileio import format_word

print("icosahedron:", curvature_audit(icosahedron()))
rng = random.Random(0)
print("random spheres:", {str(curvature_audit(random_sphere(rng.randint(0, 30), rng))) for _ in range(20)})

d = random_disk(8, rng)
print("disk boundary:   ", format_word(d.boundary_word()))
e = fold_until_reduced(d)
print("after folding:   ", format_word(e.boundary_word()))
print("capped curvature:", curvature_audit(cap_off(e)))
