#pragma once

#include <cstdlib>
#include <random>
#include <string>

#include "kolm/group.hpp"

namespace test_helpers {

/// Two-layer-plus kinetic chain with d = 4, r = 2, Q = 10: layers (2, 1, 1)
/// and non-trivial (non-identity) blocks.
inline kolm::HomogeneousGroup d4_group() {
    kolm::BlockStructure s;
    s.layer_dims = {2, 1, 1};
    Eigen::MatrixXd b1(1, 2);
    b1 << 1.0, 0.5;
    Eigen::MatrixXd b2(1, 1);
    b2 << 1.0;
    s.blocks = {b1, b2};
    return kolm::HomogeneousGroup(std::move(s));
}

/// Random admissible block structure: non-increasing layer dims with
/// d <= max_d and r <= max_r, blocks with entries in [-2, 2] redrawn until
/// every block has full row rank.
inline kolm::BlockStructure random_block_structure(std::mt19937_64& rng, int max_d = 8,
                                                   int max_r = 3) {
    std::uniform_real_distribution<double> entry(-2.0, 2.0);
    for (;;) {
        kolm::BlockStructure s;
        const int r = static_cast<int>(rng() % (max_r + 1));
        int p_prev = 1 + static_cast<int>(rng() % 3);
        s.layer_dims.push_back(p_prev);
        for (int j = 1; j <= r; ++j) {
            const int p = 1 + static_cast<int>(rng() % p_prev);
            s.layer_dims.push_back(p);
            p_prev = p;
        }
        int d = 0;
        for (int p : s.layer_dims)
            d += p;
        if (d > max_d)
            continue;
        for (size_t j = 1; j < s.layer_dims.size(); ++j) {
            Eigen::MatrixXd blk(s.layer_dims[j], s.layer_dims[j - 1]);
            for (int rr = 0; rr < blk.rows(); ++rr)
                for (int cc = 0; cc < blk.cols(); ++cc)
                    blk(rr, cc) = entry(rng);
            s.blocks.push_back(std::move(blk));
        }
        try {
            kolm::HomogeneousGroup probe(s);
            return s;
        } catch (const kolm::RankDeficientBlockError&) {
            // rare for continuous entries; redraw
        }
    }
}

inline kolm::GroupPoint random_point(std::mt19937_64& rng, int d, double half_t = 2.0,
                                     double half_x = 3.0) {
    std::uniform_real_distribution<double> ut(-half_t, half_t);
    std::uniform_real_distribution<double> ux(-half_x, half_x);
    kolm::GroupPoint z{ut(rng), Eigen::VectorXd(d)};
    for (int i = 0; i < d; ++i)
        z.x[i] = ux(rng);
    return z;
}

inline kolm::GroupPoint pt2(double t, double x1, double x2) {
    return {t, Eigen::Vector2d(x1, x2)};
}

/// Required environment variable, failing loudly when absent.
inline std::string require_env(const char* name) {
    const char* v = std::getenv(name);
    if (!v)
        throw std::runtime_error(std::string("environment variable not set: ") + name);
    return v;
}

} // namespace test_helpers
