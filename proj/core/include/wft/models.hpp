// models.hpp
//
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace wft {

constexpr int max_state_size = 4;

using State = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, max_state_size, 1>;
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, max_state_size, max_state_size>;

enum class FieldKind { GenuinelyNonlinear, LinearlyDegenerate };

/// Consecutive fields sharing one eigenvalue (size > 1 only for a repeated,
/// necessarily linearly degenerate, eigenvalue).
struct FieldGroup {
    int first;
    int size;
};

struct Eigensystem {
    State lambda;  // ascending
    Matrix right;  // column j is r_j
    Matrix left;   // row j is l_j, left * right = I
};

struct ModelParams {
    double gamma = 1.4;
    double k = 1.0;
};

class SystemModel {
public:
    virtual ~SystemModel() = default;

    virtual std::string name() const = 0;
    virtual int size() const = 0;
    virtual State flux(const State& u) const = 0;
    virtual Matrix jacobian(const State& u) const = 0;
    virtual State eigenvalues(const State& u) const = 0;
    virtual Eigensystem eigensystem(const State& u) const = 0;
    virtual FieldKind field_kind(int j) const = 0;
    virtual bool admissible(const State& u) const = 0;
    virtual State background() const = 0;

    /// Map a point of the unit cube [0,1]^sample_dim onto the sampling box.
    virtual int sample_dim() const { return size(); }
    virtual State sample(std::span<const double> unit) const = 0;

    virtual std::vector<FieldGroup> groups() const;
    /// Declared lower bound for eigenvalue gaps between groups on the box.
    virtual double min_gap() const { return 1e-3; }

    virtual double eigenvalue(const State& u, int j) const { return eigenvalues(u)[j]; }
    virtual State right_eigenvector(const State& u, int j) const { return eigensystem(u).right.col(j); }

    /// (r_j . grad) r_k at u, by central differences.
    State directional_derivative(const State& u, int j, int k) const;

    int group_of(int j) const;
    void require_admissible(const State& u) const;
};

std::unique_ptr<SystemModel> make_model(const std::string& name, const ModelParams& params = {});
std::vector<std::string> model_names();

/// Checked eigen decomposition; throws InadmissibleState.
Eigensystem eigen_decompose(const SystemModel& model, const State& u);

/// b_j = 1/2 l_j . D^2F(u)(r_j, r_j) with D^2F by central differences.
double b_coefficient(const SystemModel& model, const State& u, int j);

/// max |lambda| over a seeded sample of the model's box and the given states
double speed_bound(const SystemModel& model, std::span<const State> extra = {});

struct LintReport {
    std::string model;
    int samples = 0;
    double biorthogonality = 0.0;
    double eigen_residual = 0.0;
    double gnl_normalization = 0.0;
    double ld_degeneracy = 0.0;
    double jacobian_error = 0.0;
    double ordering = 0.0;  // > 0 means ordering or grouping violated
    bool passed = false;

    static constexpr double biorthogonality_tol = 1e-9;
    static constexpr double eigen_residual_tol = 1e-8;
    static constexpr double normalization_tol = 1e-8;
    static constexpr double jacobian_tol = 1e-6;
};

LintReport model_lint(const SystemModel& model, int sample_count, std::uint64_t seed = 1);

State make_state(std::initializer_list<double> values);
double norm1(const State& u);

}  // namespace wft
