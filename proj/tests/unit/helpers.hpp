#pragma once

#include "empathic/core/matrix.hpp"

#include <Eigen/Dense>

#include <unistd.h>

#include <filesystem>
#include <random>
#include <string>

namespace testutil {

// Row-stochastic with every diagonal >= floor; off-diagonal entries are zero
// with probability `sparsity`, otherwise at least `min_arc`.
inline Eigen::MatrixXd random_stochastic(std::mt19937_64& rng, int n, double floor = 0.01, double sparsity = 0.0,
                                         double min_arc = 0.0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i != j && u(rng) < sparsity) continue;
            w(i, j) = min_arc + u(rng);
        }
        w.row(i) /= w.row(i).sum();
        if (w(i, i) < floor) {
            const double rest = 1.0 - w(i, i);
            for (int j = 0; j < n; ++j)
                if (j != i) w(i, j) *= (1.0 - floor) / rest;
            w(i, i) = floor;
        }
    }
    return w;
}

inline Eigen::MatrixXd random_utilities(std::mt19937_64& rng, int n, int m) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    Eigen::MatrixXd x(n, m);
    for (int i = 0; i < n; ++i) {
        for (int s = 0; s < m; ++s) x(i, s) = u(rng);
        x.row(i) /= x.row(i).sum();
    }
    return x;
}

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("empathic_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline std::string data_file(const std::string& name) { return std::string(EMPATHIC_DATA_DIR) + "/" + name; }

}  // namespace testutil
