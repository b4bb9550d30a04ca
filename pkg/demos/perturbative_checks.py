"""Exact small-grid perturbation theory against the finite-N equations."""
from tensor_sde import perturbation as pt

for n in (1, 2):
    for sector in ("2pt", "4pt_V1", "4pt_m"):
        r = pt.check_appendix_expansion(sector, n, 2)
        print("N=%d %-7s %2d configurations  residual by order %s  %s"
              % (n, sector, r["arguments"], [str(v) for v in r["residuals"]], r["claims"]))

w = pt.check_wti_identity(2, 1)
print("\nWard identity, N=2, order 1: residuals", [str(v) for v in w["residuals"]], "over", w["pairs"], "pairs")

print("\nexact 2-point series at N=2, x=(1/2,1/2,1/2):",
      pt.wick_correlator(pt.WickSpec("m", [(1, 1, 1)], order=2)))

print("\nfinite-N minus large-N first-order coefficient")
for row in pt.large_n_consistency():
    print("  p=%s  %s" % (tuple(row["momentum"]), "  ".join("%.4f" % d for d in row["difference"])))
