// Tour of the library on the golden ratio: best-approximation records,
// growth diagnostics, a constructed shift vector, and its verification.

#include <dioph/dioph.hpp>

#include <iostream>

using namespace dioph;

int main() {
    set_working_bits(256);
    Matrix th(1, 1, {Scalar::golden()});

    auto seq = compute_best_approx(th, 100000);
    std::cout << "best-approximation records up to 1e5: " << seq.records.size()
              << "\n";
    for (size_t i = 0; i < 6; ++i)
        std::cout << "  nu=" << i + 1 << "  P=" << seq.records[i].P
                  << "  r=" << seq.records[i].r.to_double() << "\n";

    auto growth = check_growth_props(seq);
    std::cout << "growth properties: " << (growth.pass ? "pass" : "FAIL")
              << "\n";

    auto est = estimate_exponents(seq);
    std::cout << "exponent estimates: omega=" << est.omega_est
              << " omega_hat=" << est.omega_hat_est << "\n";

    auto phi = ApproxFunction::f1();
    auto c = construct_eta(seq, phi, 6);
    std::cout << "constructed shift eta=" << c.eta_mod[0].to_double()
              << " (depth " << c.depth << ", tail " << c.tail_bound.to_double()
              << ")\n";

    auto inv = check_eta_invariants(c);
    auto ver = verify_construction(c, phi, 1, 144);
    std::cout << "invariants: " << (inv.pass ? "pass" : "FAIL")
              << "   verification ratio: " << ver.metrics["ratio"] << "\n";

    auto dirs = asymptotic_directions(seq);
    std::cout << "asymptotic direction clusters: " << dirs.clusters.size()
              << "\n";
    return 0;
}
