"""Schurian behaviour of the shipped non-Schurian S-ring fixture.

The fixture is the Shrikhande graph as a Cayley graph on Z4 x Z4.  The
4 x 4 rook's graph has the same parameters (16, 6, 2, 2) and is Schurian,
which makes it a useful contrast.  Products with small Schurian schemes
inherit non-Schurian-ness from the fixture in every position.
"""

from pathlib import Path

from wreathschemes.autgroup import color_aut_group, is_schurian, orbitals
from wreathschemes.cayley import (
    ClassPartition,
    cayley_scheme,
    cyclic_group,
    direct_product_group,
    parse_sring,
)
from wreathschemes.products import class_one, direct_product, wreath_product
from wreathschemes.scheme import intersection_numbers

FIXTURE = Path(__file__).resolve().parents[1] / "tests" / "fixtures" / "non_schurian_sring.json"


def report(name, s):
    group = color_aut_group(s)
    n_orb = int(orbitals(group).max()) + 1
    print(f"{name:<26} points {s.size:>3}  relations {s.num_relations}  |Aut(X|I)| {group.order:>8}  "
          f"orbitals {n_orb:>3}  schurian {is_schurian(s)}")


def main():
    shrikhande = cayley_scheme(*parse_sring(FIXTURE.read_text()))
    g = direct_product_group(cyclic_group(4), cyclic_group(4))
    rook_set = [a * 4 for a in range(1, 4)] + list(range(1, 4))
    rook = cayley_scheme(g, ClassPartition([[0], rook_set, [x for x in range(1, 16) if x not in rook_set]]))
    same = (intersection_numbers(rook).p == intersection_numbers(shrikhande).p).all()
    print(f"rook and Shrikhande share intersection numbers: {bool(same)}")
    report("rook 4x4", rook)
    report("Shrikhande", shrikhande)
    h2, h3 = class_one(2), class_one(3)
    report("Shrikhande wr H(1,2)", wreath_product(shrikhande, h2))
    report("H(1,2) wr Shrikhande", wreath_product(h2, shrikhande))
    report("H(1,3) wr Shrikhande", wreath_product(h3, shrikhande))
    report("Shrikhande x H(1,2)", direct_product(shrikhande, h2))
    report("rook wr H(1,2)", wreath_product(rook, h2))


if __name__ == "__main__":
    main()
