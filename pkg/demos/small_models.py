"""Count small mobi algebras and match them against rings in which 2 is a unit."""
import sys
import time

from mobi.search import canonical_form, enumerate_mobi, enumerate_rings_with_half
from mobi.transforms import ring_to_mobi


def main(max_order: int = 7):
    for n in range(1, max_order + 1):
        t = time.perf_counter()
        mobis = enumerate_mobi(n, up_to_iso=True)
        rings = enumerate_rings_with_half(n)
        same = {canonical_form(m) for m in mobis.structures} == {
            canonical_form(ring_to_mobi(r)) for r in rings.structures}
        print(f"order {n}: {mobis.count} mobi, {rings.count} ring(s), classes match: {same}, "
              f"{mobis.stats.nodes} nodes, {time.perf_counter() - t:.2f}s")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 7)
