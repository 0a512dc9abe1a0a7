#include <cmath>

#include "currl/active_regression.hpp"
#include "currl/harness.hpp"
#include "currl/rng.hpp"

namespace currl {

namespace {

double normal(Rng& rng) {
    const double u1 = 1.0 - rng.uniform01();  // (0, 1]
    const double u2 = rng.uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

Eigen::VectorXd gaussian_vector(Rng& rng, int d) {
    Eigen::VectorXd v(d);
    for (int i = 0; i < d; ++i) {
        v(i) = normal(rng);
    }
    return v;
}

// Random SPD matrix with eigenvalues in [0.1, 10]: well conditioned enough
// for the direct-inversion cross-checks to be meaningful at tight tolerances.
Eigen::MatrixXd random_spd(Rng& rng, int d) {
    Eigen::MatrixXd g(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            g(i, j) = normal(rng);
        }
    }
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    const Eigen::MatrixXd q = qr.householderQ();
    Eigen::VectorXd eigenvalues(d);
    for (int i = 0; i < d; ++i) {
        eigenvalues(i) = rng.uniform(0.1, 10.0);
    }
    return q * eigenvalues.asDiagonal() * q.transpose();
}

PropertyResult check_sherman_morrison(Rng rng) {
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const int d = 2 + trial % 5;
        active::DesignState design(d);
        Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(d, d);
        for (int row = 0; row < 20; ++row) {
            const Eigen::VectorXd v = gaussian_vector(rng, d);
            design.add(v, normal(rng));
            gram.noalias() += v * v.transpose();
        }
        const Eigen::MatrixXd batch = gram.inverse();
        const Eigen::MatrixXd& maintained = design.gram_inverse();
        worst = std::max(worst, (batch - maintained).cwiseAbs().maxCoeff());
        const Eigen::MatrixXd identity_gap =
            maintained * gram - Eigen::MatrixXd::Identity(d, d);
        worst = std::max(worst, identity_gap.cwiseAbs().maxCoeff());
    }
    return PropertyResult{"sherman-morrison-consistency", worst <= 1e-8,
                          "50 sequences of 20 appends, max deviation " +
                              format_double(worst)};
}

PropertyResult check_trace_identity(Rng rng) {
    bool ok = true;
    for (int trial = 0; trial < 200; ++trial) {
        const int d = 2 + trial % 5;
        const Eigen::MatrixXd a = random_spd(rng, d);
        const Eigen::VectorXd v = gaussian_vector(rng, d);
        ok = ok && trace_identity_holds(a, v, 1e-9);
    }
    return PropertyResult{"trace-identity", ok, "200 random SPD matrices, tolerance 1e-9"};
}

PropertyResult check_greedy_a_optimality(Rng rng) {
    bool ok = true;
    for (int trial = 0; trial < 200; ++trial) {
        const int d = 2 + trial % 5;
        const Eigen::MatrixXd a = random_spd(rng, d);
        std::vector<active::Candidate> candidates;
        for (int c = 0; c < 10; ++c) {
            candidates.push_back({gaussian_vector(rng, d), c});
        }
        const std::size_t picked = active::select_sample(a, candidates);
        // Brute force: the post-update trace by direct inversion.
        std::size_t best = 0;
        double best_trace = std::numeric_limits<double>::infinity();
        const Eigen::MatrixXd gram = a.inverse();
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            const Eigen::MatrixXd updated =
                (gram + candidates[c].v * candidates[c].v.transpose()).inverse();
            if (updated.trace() < best_trace) {
                best_trace = updated.trace();
                best = c;
            }
        }
        ok = ok && (picked == best);
    }
    return PropertyResult{"greedy-a-optimality", ok,
                          "200 candidate sets against direct-inversion argmin"};
}

PropertyResult check_eigenvector_claim(Rng rng) {
    double worst_excess = -std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::MatrixXd a = random_spd(rng, 2);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
        const double top_gain =
            active::trace_gain(a, eig.eigenvectors().col(1).normalized());
        double best = -std::numeric_limits<double>::infinity();
        for (int k = 0; k < 2000; ++k) {
            const double angle = M_PI * k / 2000.0;
            Eigen::Vector2d v(std::cos(angle), std::sin(angle));
            best = std::max(best, active::trace_gain(a, v));
        }
        worst_excess = std::max(worst_excess, best - top_gain);
    }
    for (int trial = 0; trial < 60; ++trial) {
        const Eigen::MatrixXd a = random_spd(rng, 3);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
        const double top_gain =
            active::trace_gain(a, eig.eigenvectors().col(2).normalized());
        double best = -std::numeric_limits<double>::infinity();
        const int samples = 8000;
        const double golden = M_PI * (3.0 - std::sqrt(5.0));
        for (int k = 0; k < samples; ++k) {
            const double z = 1.0 - 2.0 * (k + 0.5) / samples;
            const double r = std::sqrt(1.0 - z * z);
            const double phi = golden * k;
            Eigen::Vector3d v(r * std::cos(phi), r * std::sin(phi), z);
            best = std::max(best, active::trace_gain(a, v));
        }
        worst_excess = std::max(worst_excess, best - top_gain);
    }
    return PropertyResult{
        "eigenvector-claim", worst_excess <= 1e-6,
        "dense unit-sphere sampling in d=2,3; max excess over the top eigenvector " +
            format_double(worst_excess)};
}

}  // namespace

bool trace_identity_holds(const Eigen::MatrixXd& A, const Eigen::VectorXd& v, double tol) {
    const double lhs = A.trace() - active::trace_gain(A, v);
    const Eigen::MatrixXd gram = A.inverse();
    const double rhs = (gram + v * v.transpose()).inverse().trace();
    return std::abs(lhs - rhs) <= tol;
}

VerifyReport verify_active(std::uint64_t seed) {
    const Rng root(seed);
    VerifyReport report;
    report.properties.push_back(check_sherman_morrison(root.child({1})));
    report.properties.push_back(check_trace_identity(root.child({2})));
    report.properties.push_back(check_greedy_a_optimality(root.child({3})));
    report.properties.push_back(check_eigenvector_claim(root.child({4})));
    return report;
}

}  // namespace currl
