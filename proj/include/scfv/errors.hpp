#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace scfv {

/// Configuration / input validation failure. Carries every violation found,
/// not just the first one.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> violations)
        : std::runtime_error(join(violations)), violations_(std::move(violations)) {}

    explicit ConfigError(const std::string& msg)
        : ConfigError(std::vector<std::string>{msg}) {}

    const std::vector<std::string>& violations() const { return violations_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out;
        for (const auto& s : v) {
            if (!out.empty()) out += "; ";
            out += s;
        }
        return out;
    }

    std::vector<std::string> violations_;
};

/// Runtime failure of the nonlinear solver (Picard divergence, loss of
/// density positivity, ...).
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& msg, int step_index = -1)
        : std::runtime_error(msg), step_index_(step_index) {}

    int step_index() const { return step_index_; }

private:
    int step_index_;
};

/// A node solve of the collocation ensemble failed.
class EnsembleError : public std::runtime_error {
public:
    EnsembleError(const std::string& msg, int node_index, int completed_nodes)
        : std::runtime_error(msg), node_index_(node_index), completed_(completed_nodes) {}

    int node_index() const { return node_index_; }
    int completed_nodes() const { return completed_; }

private:
    int node_index_;
    int completed_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace scfv
