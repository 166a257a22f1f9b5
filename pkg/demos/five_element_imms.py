"""Walk through the three five-element IMM tables and what each one admits."""
from mobi import transforms as tf
from mobi.axioms import check_imm, check_imm_star, check_mobi
from mobi.exemplars import imm1, imm2, imm3


def show(b, x):
    return "(" + ", ".join(b.show(v) for v in x) + ")"


def main():
    b = imm1()
    print(f"{b.name}: IMM {check_imm(b).passed}, cancellative {check_imm_star(b).passed}")
    m = tf.imm_star_to_mobi(b)
    print("  mobi by solving equations:", check_mobi(m).passed)
    print("  same as the ½⁻¹ route:", m.same_as(tf.imm_to_mobi_via_half_inverse(b)))
    r = tf.imm_to_ring(b)
    print("  ring 1+1 =", r.show(r.apply("add", r.one, r.one)))

    b = imm2()
    c3 = check_imm_star(b)["C3"]
    print(f"{b.name}: C3 fails at {c3.shown}")
    d = tf.mobi_dagger_search(b)
    report = check_mobi(d)
    print("  Mobi† found; A6", report["A6"].status, "at", report["A6"].shown)

    b = imm3()
    sols = tf.solve_p_equation(b, "half-dot-form")
    bad = sols.unsolvable()
    print(f"{b.name}: {len(bad)} unsolvable triples, first {show(b, bad[0])}")
    try:
        tf.imm_star_to_mobi(b)
    except tf.UnsolvableTripleError as exc:
        print("  no mobi:", exc)


if __name__ == "__main__":
    main()
