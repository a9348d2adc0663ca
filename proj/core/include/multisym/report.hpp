#pragma once

#include "multisym/alternating.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace multisym {

struct EquationNorm {
    std::string equation;
    double linf = 0.0;
    double l2 = 0.0;  ///< discrete l2 over nodes: sqrt(sum of squared node values)
    std::size_t nodes = 0;
};

struct NodeResidual {
    Vector x;
    std::string equation;
    double value = 0.0;
};

/// Per-equation residual norms over a set of evaluation nodes.
class ResidualReport {
public:
    /// Records the residual magnitude of one equation at one node.
    void add(const std::string& equation, const Vector& x, double value);
    void set_config(const std::string& key, const std::string& value) { config_[key] = value; }
    void count_evaluation(std::size_t k = 1) { evaluations_ += k; }

    const std::vector<EquationNorm>& equations() const { return norms_; }
    const std::vector<NodeResidual>& samples() const { return samples_; }
    const std::map<std::string, std::string>& config() const { return config_; }
    std::size_t evaluations() const { return evaluations_; }

    bool has(const std::string& equation) const;
    const EquationNorm& norm(const std::string& equation) const;
    double max_linf() const;

    /// JSON: {"equations": [{"equation", "L_inf", "L_2", "nodes"}...], "evaluations", "config", "timestamp"?}.
    std::string to_json(const std::string& timestamp = {}) const;
    /// CSV with header x1..xn,equation,value; one row per node per equation.
    std::string to_csv() const;

private:
    EquationNorm& slot(const std::string& equation);

    std::vector<EquationNorm> norms_;
    std::vector<double> sums_;
    std::vector<NodeResidual> samples_;
    std::map<std::string, std::string> config_;
    std::size_t evaluations_ = 0;
};

}  // namespace multisym
