#include "multisym/report.hpp"

#include "multisym/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace multisym {

EquationNorm& ResidualReport::slot(const std::string& equation) {
    for (std::size_t i = 0; i < norms_.size(); ++i)
        if (norms_[i].equation == equation) return norms_[i];
    norms_.push_back(EquationNorm{equation, 0.0, 0.0, 0});
    sums_.push_back(0.0);
    return norms_.back();
}

void ResidualReport::add(const std::string& equation, const Vector& x, double value) {
    EquationNorm& e = slot(equation);
    const auto i = static_cast<std::size_t>(&e - norms_.data());
    const double a = std::abs(value);
    e.linf = std::max(e.linf, a);
    sums_[i] += a * a;
    e.l2 = std::sqrt(sums_[i]);
    ++e.nodes;
    samples_.push_back(NodeResidual{x, equation, value});
}

bool ResidualReport::has(const std::string& equation) const {
    return std::any_of(norms_.begin(), norms_.end(), [&](const EquationNorm& e) { return e.equation == equation; });
}

const EquationNorm& ResidualReport::norm(const std::string& equation) const {
    for (const EquationNorm& e : norms_)
        if (e.equation == equation) return e;
    throw ArgumentError("report has no equation named '" + equation + "'");
}

double ResidualReport::max_linf() const {
    double m = 0.0;
    for (const EquationNorm& e : norms_) m = std::max(m, e.linf);
    return m;
}

std::string ResidualReport::to_json(const std::string& timestamp) const {
    nlohmann::ordered_json j;
    j["equations"] = nlohmann::ordered_json::array();
    for (const EquationNorm& e : norms_) {
        j["equations"].push_back({{"equation", e.equation}, {"L_inf", e.linf}, {"L_2", e.l2}, {"nodes", e.nodes}});
    }
    j["evaluations"] = evaluations_;
    j["config"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : config_) j["config"][k] = v;
    if (!timestamp.empty()) j["timestamp"] = timestamp;
    return j.dump(2);
}

std::string ResidualReport::to_csv() const {
    std::ostringstream out;
    const Eigen::Index n = samples_.empty() ? 0 : samples_.front().x.size();
    for (Eigen::Index i = 0; i < n; ++i) out << 'x' << i + 1 << ',';
    out << "equation,value\n";
    char buf[32];
    for (const NodeResidual& s : samples_) {
        for (Eigen::Index i = 0; i < s.x.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", s.x[i]);
            out << buf << ',';
        }
        std::snprintf(buf, sizeof buf, "%.17g", s.value);
        out << s.equation << ',' << buf << '\n';
    }
    return out.str();
}

}  // namespace multisym
