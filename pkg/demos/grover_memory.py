"""Grover search with a classical memory holding the solution: mutual
information between memory and computer after each oracle block."""

from releq import qalgo as qa

for p in (1.0, 0.7):
    tr = qa.grover_trace(4, p, 40)
    rep = qa.step_bound_check(tr)
    print(f"p = {p}: S0 = {tr.s0:.4f} bits, all steps within the continuity bound: {rep.all_within}")
    bars = "".join(" .:-=+*#%@"[min(9, int(v / 4 * 9.99))] for v in tr.mutual_info)
    print(f"  I_MC(k), k = 0..40  |{bars}|")
    print(f"  max I_MC = {tr.mutual_info.max():.4f} bits at k = {int(tr.mutual_info.argmax())}")

print("\noracle that answers one bit per query:", qa.bitwise_oracle_trace(4).mutual_info.round(6).tolist())
print("Deutsch on f = 01:", qa.deutsch("01").verdict)
