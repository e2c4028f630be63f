// Transference walkthrough: a certificate for the inhomogeneous system at
// the golden ratio, a deliberate hypothesis failure, and the uniform check.

#include <dioph/dioph.hpp>

#include <iostream>

using namespace dioph;

int main() {
    set_working_bits(256);
    Matrix th(1, 1, {Scalar::golden()});
    Vec eta({Scalar::rational(1, 2)});

    std::cout << "kappa(1,1) = " << kappa(1, 1).str() << "\n";

    auto cert = cassels_solve(th, eta, 5, 23);
    std::cout << "Y=5 Q=23: witness q=" << cert.witness_q[0]
              << " achieved=" << cert.achieved.to_double()
              << " (target " << 2.0 / 5 << ")\n";

    try {
        cassels_solve(th, eta, 5, 10);
    } catch (const hypothesis_violated& e) {
        std::cout << "Y=5 Q=10: hypothesis fails at y=" << e.y[0]
                  << " with ||theta y|| = " << e.dist.to_double() << "\n";
    }

    auto sb = scalar_bound_check(th, eta, IVec{1}, IVec{5});
    std::cout << "scalar bound: " << sb.lhs.to_double()
              << " <= " << sb.rhs.to_double() << "\n";

    auto rep = jarnik_uniform_check(th, eta, ApproxFunction::f1(0.05), 10, 1000);
    std::cout << "uniform check: " << (rep.pass ? "pass" : "FAIL")
              << " max_product=" << rep.metrics["max_product"]
              << " (kappa=" << rep.metrics["kappa"] << ")\n";

    auto ineq = exponent_inequalities(th, eta, 100000);
    std::cout << "exponent inequalities: " << (ineq.pass ? "pass" : "FAIL")
              << " residuals " << ineq.metrics["residual_omega_vs_inv_omega_hat_dual"]
              << ", " << ineq.metrics["residual_omega_hat_vs_inv_omega_dual"]
              << "\n";
    return 0;
}
