#include "empathic/relations/relations.hpp"

#include "empathic/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

namespace empathic::relations {

namespace {

using constraints::LinearRelation;
using solver::Sense;
using solver::SolveStatus;

Probe run(const constraints::ConstraintSystem& sys, const LinearRelation& extra) {
    const auto f = constraints::feasible(sys, {extra});
    return Probe{f.status, f.eps_star};
}

void require_pair(const constraints::ConstraintSystem& sys, int i, int j) {
    if (i == j) throw PreconditionError("relation probes need i != j");
    if (i < 0 || j < 0 || i >= sys.n() || j >= sys.n()) throw ValidationError("node index out of range", "i");
}

bool is_necessary(const Probe& p) {
    return p.status == SolveStatus::Infeasible || (p.status == SolveStatus::Optimal && p.eps_star < -1e-9);
}

bool is_possible(const Probe& p) {
    return p.status == SolveStatus::Unbounded || (p.status == SolveStatus::Optimal && p.eps_star > 1e-9);
}

std::string format_eps(const Probe& p) {
    if (p.status == SolveStatus::Infeasible) return "infeasible";
    if (p.status == SolveStatus::Unbounded) return "unbounded";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", p.eps_star);
    return buf;
}

}  // namespace

std::string to_string(RelationClass c) {
    switch (c) {
        case RelationClass::SelfAlways: return "SelfAlways";
        case RelationClass::Necessary: return "Necessary";
        case RelationClass::PossibleOnly: return "PossibleOnly";
        case RelationClass::Impossible: return "Impossible";
    }
    return "SelfAlways";
}

RelationClass relation_class_from(const std::string& s) {
    for (auto c : {RelationClass::SelfAlways, RelationClass::Necessary, RelationClass::PossibleOnly,
                   RelationClass::Impossible})
        if (to_string(c) == s) return c;
    throw ValidationError("unknown relation class '" + s + "'", "class");
}

Probe model2(const constraints::ConstraintSystem& sys, int i, int j) {
    require_pair(sys, i, j);
    return run(sys, LinearRelation{{{i, j, 1.0}}, 0.0, Sense::Equal, 0.0});
}

Probe model3(const constraints::ConstraintSystem& sys, int i, int j) {
    require_pair(sys, i, j);
    return run(sys, LinearRelation{{{i, j, 1.0}}, 0.0, Sense::GreaterEqual, sys.thresholds().eps_prime});
}

bool necessary(const constraints::ConstraintSystem& sys, int i, int j) { return is_necessary(model2(sys, i, j)); }

bool possible(const constraints::ConstraintSystem& sys, int i, int j) { return is_possible(model3(sys, i, j)); }

Cell classify(const constraints::ConstraintSystem& sys, int i, int j) {
    Cell c;
    if (i == j) return c;
    c.model2 = model2(sys, i, j);
    c.model3 = model3(sys, i, j);
    c.borderline = c.model2.status == SolveStatus::Optimal && std::abs(c.model2.eps_star) <= 1e-9;
    if (is_necessary(c.model2)) c.cls = RelationClass::Necessary;
    else if (is_possible(c.model3)) c.cls = RelationClass::PossibleOnly;
    else c.cls = RelationClass::Impossible;
    return c;
}

Cell ProbeCache::get(const constraints::ConstraintSystem& sys, int i, int j) {
    const auto key = std::make_tuple(sys.hash(), i, j);
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = cells_.find(key);
        if (it != cells_.end()) return it->second;
    }
    Cell c = classify(sys, i, j);
    std::lock_guard<std::mutex> lock(mu_);
    cells_.emplace(key, c);
    return c;
}

std::size_t ProbeCache::size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return cells_.size();
}

void ProbeCache::clear() {
    std::lock_guard<std::mutex> lock(mu_);
    cells_.clear();
}

RelationMatrix relation_matrix(const constraints::ConstraintSystem& sys, int workers) {
    ProbeCache cache;
    return relation_matrix(sys, cache, workers);
}

RelationMatrix relation_matrix(const constraints::ConstraintSystem& sys, ProbeCache& cache, int workers) {
    const auto f = constraints::feasible(sys);
    if (!f.consistent())
        throw PreconditionError("constraint system is inconsistent; resolve inconsistencies before computing relations");
    const int n = sys.n();
    RelationMatrix rm;
    rm.n = n;
    rm.cells.resize(static_cast<std::size_t>(n) * n);
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) pairs.push_back({i, j});
    const int width = std::max(1, workers > 0 ? workers : static_cast<int>(std::thread::hardware_concurrency()));
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    auto work = [&] {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= pairs.size()) return;
            try {
                rm.at(pairs[k].first, pairs[k].second) = cache.get(sys, pairs[k].first, pairs[k].second);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!error) error = std::current_exception();
            }
        }
    };
    if (width == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < width; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);
    return rm;
}

std::string to_csv(const RelationMatrix& r) {
    std::ostringstream os;
    os << "i,j,class,eps_model2,eps_model3\n";
    for (int i = 0; i < r.n; ++i)
        for (int j = 0; j < r.n; ++j) {
            if (i == j) continue;
            const auto& c = r.at(i, j);
            os << i + 1 << ',' << j + 1 << ',' << to_string(c.cls) << ',' << format_eps(c.model2) << ','
               << format_eps(c.model3) << '\n';
        }
    return os.str();
}

}  // namespace empathic::relations
