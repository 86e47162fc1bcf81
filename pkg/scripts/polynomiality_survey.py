"""P- and Q-polynomiality of wreath products of small schemes, computed two
ways: exactly from intersection numbers / idempotent values, and by brute
force from powers of the matrices with a numeric rank."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from oracles import PAIRS, brute_p_polynomial, brute_q_polynomial, catalog  # noqa: E402
from wreathschemes.products import wreath_product  # noqa: E402
from wreathschemes.scheme import is_symmetric  # noqa: E402
from wreathschemes.spectral import is_p_polynomial, is_q_polynomial  # noqa: E402


def main():
    cat = catalog()
    print(f"{'pair':<12} {'P':>6} {'P brute':>8} {'Q':>6} {'Q brute':>8}")
    for a, b in PAIRS:
        w = wreath_product(cat[a], cat[b])
        p, q = is_p_polynomial(w), is_q_polynomial(w)
        bp = brute_p_polynomial(w.relation, w.num_relations)
        bq = brute_q_polynomial(w.relation, w.num_relations) if is_symmetric(w) else "-"
        flag = "  <-" if p or q else ""
        print(f"{a + ' wr ' + b:<12} {p!s:>6} {bp!s:>8} {q!s:>6} {bq!s:>8}{flag}")


if __name__ == "__main__":
    main()
