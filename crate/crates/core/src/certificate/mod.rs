//! Semidefinite dual certificate for the weighted-cost optimality of the
//! cloner.
//!
//! Minimizing `C̃(G) = Σ_j x_j (G_jj + G_{M+j,M+j})` over all `G` with
//! `G + iK ⪰ 0` is a linear SDP. A matrix `Z ⪰ 0` with `Tr[ZG] = C̃(G)` for
//! all symmetric `G` gives the lower bound `C̃(G) >= -i Tr[ZK]`, and
//! `Z (G_opt + iK) = 0` shows the bound is attained by the cloner.

mod dual;
mod problem;
mod scan;

pub use dual::{build_certificate, verify_certificate, CertificateReport, DualCertificate};
pub use problem::{build_problem, CertifiedProblem};
pub use scan::{random_feasible_cost_scan, ScanReport};
