// The classic 2x2 cautionary example: a perturbation comparable to the
// eigengap moves the leading eigenvector by a constant amount no matter how
// small epsilon is, and the Davis-Kahan certificate flags exactly why.
#include "specp/specp.hpp"

#include <cstdio>

int main() {
  using namespace specp;
  const double eps = 0.1;
  Matrix mstar(2, 2), e(2, 2);
  mstar << 1 + eps, 0, 0, 1 - eps;
  e << -eps, eps, eps, eps;

  const Instance inst = instance_from_parts(SymMatrix(mstar), SymMatrix(e), 1,
                                            /*sigma=*/eps, /*bound=*/eps);
  const Estimate est = compute_estimate(inst);
  const AlignmentReport rep =
      align(Subspace(est.u), inst.ustar);

  std::printf("projector distance (spectral): %.6f\n", rep.proj_spectral);
  std::printf("projector distance (frobenius): %.6f\n", rep.proj_fro);

  const LooEnsemble ens = build_ensemble(inst);
  for (const auto& cert : lemma_certificates(inst, ens, est)) {
    if (cert.id == "L2-dist") {
      std::printf("certificate %s: %s\n", cert.id.c_str(), to_string(cert.status));
      for (const auto& p : cert.preconditions)
        std::printf("  %s: %.6g <= %.6g ? %s\n", p.name.c_str(), p.lhs, p.rhs,
                    p.satisfied ? "yes" : "no");
    }
  }
  return 0;
}
