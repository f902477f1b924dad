"""Method of types: type classes, their probabilities and the
large-deviation exponent for mistaking a fair coin for a biased one."""

from releq import classical_info as ci

print("type of 011010:", ci.type_of("011010", "01").counts, "class size", ci.type_of("011010", "01").class_size)
print("\n n   exact Q^n(T(P))   lower        upper")
for n in (3, 6, 12, 24, 48):
    r = ci.type_class_prob([0.5, 0.5], [1 / 3, 2 / 3], n)
    print(f"{n:3d}   {r.exact:.6e}     {r.lower:.4e}   {r.upper:.4e}")

p_star, d = ci.sanov_exponent([0.5, 0.5], [[1 / 3, 2 / 3], [0.45, 0.55]], units="nats")
print(f"\nclosest candidate {p_star}, exponent {d:.5f} nats")
print(f"per-trial factor exp(-D) = {ci.confusion_probability(1, [0.5, 0.5], [1 / 3, 2 / 3]):.5f}")
