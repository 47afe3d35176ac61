#include "empathic/welfare/welfare.hpp"

#include "empathic/core/network.hpp"
#include "empathic/error.hpp"

#include <cstdio>
#include <sstream>

namespace empathic::welfare {

std::vector<double> social_welfare(const core::UtilityMatrix& u) {
    const Eigen::VectorXd s = u.matrix().colwise().sum().transpose();
    return std::vector<double>(s.data(), s.data() + s.size());
}

int best_index(const std::vector<double>& sw) {
    int best = 0;
    for (int s = 1; s < static_cast<int>(sw.size()); ++s)
        if (sw[s] > sw[best]) best = s;
    return best;
}

int best_alternative(const core::UtilityMatrix& u) { return best_index(social_welfare(u)); }

namespace {

WelfareRow row(const std::string& label, const core::UtilityMatrix& u) {
    WelfareRow r{label, social_welfare(u), 0};
    r.best = best_index(r.sw);
    return r;
}

}  // namespace

WelfareReport compare_networks(const core::UtilityMatrix& u_i,
                               const std::vector<std::pair<std::string, core::EmpathicMatrix>>& networks) {
    WelfareReport rep;
    rep.rows.push_back(row(kBaselineLabel, u_i));
    for (const auto& [label, w] : networks) rep.rows.push_back(row(label, core::apply_network(w, u_i)));
    return rep;
}

WelfareReport compare_utilities(const core::UtilityMatrix& u_i,
                                const std::vector<std::pair<std::string, core::UtilityMatrix>>& utilities) {
    WelfareReport rep;
    rep.rows.push_back(row(kBaselineLabel, u_i));
    for (const auto& [label, u] : utilities) {
        if (u.m() != u_i.m()) throw ValidationError("utility matrices differ in alternative count", "m");
        rep.rows.push_back(row(label, u));
    }
    return rep;
}

std::string to_csv(const WelfareReport& r) {
    std::ostringstream os;
    os << "network";
    const std::size_t m = r.rows.empty() ? 0 : r.rows.front().sw.size();
    for (std::size_t s = 0; s < m; ++s) os << ",a" << s + 1;
    os << ",best\n";
    char buf[32];
    for (const auto& row : r.rows) {
        os << row.label;
        for (double v : row.sw) {
            std::snprintf(buf, sizeof buf, "%.4f", v);
            os << ',' << buf;
        }
        os << ",a" << row.best + 1 << '\n';
    }
    return os.str();
}

}  // namespace empathic::welfare
