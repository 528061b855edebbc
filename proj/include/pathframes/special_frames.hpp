#pragma once

#include "pathframes/derivations.hpp"
#include "pathframes/matrix_ivp.hpp"
#include "pathframes/tube.hpp"

#include <cstdint>
#include <memory>

namespace pathframes {

/// Direction matrices Gamma_m(gamma(s)), m over chart coordinates, of a
/// derivation that is linear in X along the path: W_X = Gamma_m X^m there.
using PathConnection = std::function<std::vector<Matrix>(double)>;

PathConnection path_connection(const ConnectionField& conn, const PathCurve& path);

/// Gamma_m = W_{e_m}(gamma(s)) from a derivation known to be linear along
/// the path (coordinate frame, constant unit fields e_m).
PathConnection path_connection(const SDerivationField& s, const PathCurve& path,
                               const ChartDomain& chart);

/// W_X on the path for the tangent lift X = gamma_dot: Gamma_m gamma_dot^m.
CoefficientMap tangent_components(const PathConnection& gamma, const PathCurve& path);
CoefficientMap tangent_components(const ConnectionField& conn, const PathCurve& path);

struct TransportOptions {
  IvpOptions ivp;
  /// Max allowed |W'|_inf on the grid after the build.
  double residual_tolerance = 1e-8;
};

/// Frame A(s) = Y(s, s0; -W) B along a path, in which the components of the
/// derivation along the tangent vanish.
///
/// The stored residual is |A^{-1}(W A + dA/ds)|_inf per node, with dA/ds
/// taken by a fourth-order stencil over the computed frames rather than from
/// the right-hand side of the ODE.
class TransportSolution {
 public:
  const std::vector<double>& grid() const { return data_->y.grid(); }
  double s0() const { return data_->y.s0(); }
  const Matrix& initial() const { return data_->b; }
  const std::vector<Matrix>& frames() const { return data_->frames; }
  const std::vector<Matrix>& components_on_grid() const { return data_->w_grid; }
  const std::vector<double>& residual() const { return data_->residual; }
  double max_residual() const;
  const CoefficientMap& components() const { return data_->w; }

  /// A(s) off the grid, integrated from the nearest node.
  Matrix frame_at(double s) const;

 private:
  struct Data {
    FundamentalSolution y;
    Matrix b;
    CoefficientMap w;
    std::vector<Matrix> frames;
    std::vector<Matrix> w_grid;
    std::vector<double> residual;
  };
  explicit TransportSolution(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
  friend TransportSolution special_frame_along_path(CoefficientMap, double, const Matrix&,
                                                    const std::vector<double>&,
                                                    const TransportOptions&);

  std::shared_ptr<const Data> data_;
};

/// Solves dA/ds = -W(s) A, A(s0) = B on a uniform grid (at least 5 nodes).
/// Throws ArgumentError for a singular B and ConstructionError when the
/// residual exceeds the tolerance.
TransportSolution special_frame_along_path(CoefficientMap w_on_path, double s0, const Matrix& b,
                                           const std::vector<double>& grid,
                                           const TransportOptions& options = {});

/// Max over the grid of |d(A1^{-1} A2)/ds|_inf. Throws ArgumentError if the
/// two solutions live on different grids.
double verify_transition_constancy(const TransportSolution& first,
                                   const TransportSolution& second);

struct TubeFrameOptions {
  IvpOptions ivp;
  /// Finite-difference step for the residual check of Gamma_k A + E_k(A) = 0.
  double transverse_step = 1e-4;
  double residual_tolerance = 5e-6;
};

/// Frame on a tube around the path in which the components of the
/// derivation along every X vanish on the path:
///
///   A(eta(s, t)) = [I - sum_a M_a(s) (t^a - t0^a)] Y(s, s0; -Gamma_gamma_dot) B,
///   M_a(s) = Gamma_m(gamma(s)) N^m_a(s),
///
/// which is the first-order part of the general solution; quadratic terms
/// in (t - t0) are left out since they do not affect anything on the path.
class TubeFrameSolution {
 public:
  const TubeMap& tube() const { return data_->tube; }
  const std::vector<double>& grid() const { return data_->y.grid(); }
  const Matrix& initial() const { return data_->b; }
  /// Gamma_m(gamma(s_k)) per grid node.
  const std::vector<std::vector<Matrix>>& gamma_on_path() const { return data_->gamma_grid; }
  /// max_m |Gamma_m A + d_m A|_inf per grid node.
  const std::vector<double>& residual() const { return data_->residual; }
  double max_residual() const;

  /// Frame on the path at the grid nodes, Y(s_k) B.
  std::vector<Matrix> path_frames() const;

  Matrix frame_at(double s, const Vector& t) const;
  Matrix frame_at_point(const Vector& x) const;
  FrameField frame_field() const;

 private:
  struct Data {
    TubeMap tube;
    PathConnection gamma;
    FundamentalSolution y;
    Matrix b;
    std::vector<std::vector<Matrix>> gamma_grid;
    std::vector<double> residual;
  };
  explicit TubeFrameSolution(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
  friend TubeFrameSolution special_frame_all_fields(const PathConnection&, const TubeMap&,
                                                    const ChartDomain&, double, const Matrix&,
                                                    const std::vector<double>&,
                                                    const TubeFrameOptions&);

  std::shared_ptr<const Data> data_;
};

/// Builds the all-fields special frame and checks the residual on the path
/// by central differences in every chart direction. Throws
/// ConstructionError if the residual exceeds the tolerance.
TubeFrameSolution special_frame_all_fields(const PathConnection& gamma, const TubeMap& tube,
                                           const ChartDomain& chart, double s0, const Matrix& b,
                                           const std::vector<double>& grid,
                                           const TubeFrameOptions& options = {});

struct LinearityReport {
  bool linear = false;
  /// Max |W_X - Gamma_k X^k|_inf over nodes and cross-validation probes.
  double residual = 0.0;
  /// Gamma_k(gamma(s)) per grid node, fitted from the unit probes.
  std::vector<std::vector<Matrix>> gamma_on_path;
};

/// Fits W_X(gamma(s)) = Gamma_k X^k at every grid node from the n constant
/// unit fields, then cross-validates on probe_count - n random constant
/// fields (coefficients in [-2, 2], seeded) plus any extra probes.
/// Throws ArgumentError if probe_count < n.
LinearityReport is_linear_along_path(const SDerivationField& s, const PathCurve& path,
                                     const ChartDomain& chart, int probe_count,
                                     std::uint64_t seed, double tolerance = 1e-8,
                                     const std::vector<Vector>& extra_probes = {});

/// Same construction for an S-derivation; runs is_linear_along_path first
/// and throws NotAConnectionError when it fails.
TubeFrameSolution special_frame_all_fields(const SDerivationField& s, const TubeMap& tube,
                                           const ChartDomain& chart, double s0, const Matrix& b,
                                           const std::vector<double>& grid, int probe_count,
                                           std::uint64_t seed,
                                           const TubeFrameOptions& options = {});

/// Covariant derivative of a vector along the path, dV/ds + W(s) V, with V
/// and W in the same frame. The sampled overload differentiates with a
/// fourth-order grid stencil; the functional one with a central difference.
std::vector<Vector> derivative_along_path(const std::vector<Matrix>& w_on_grid,
                                          const std::vector<Vector>& v_on_grid,
                                          const std::vector<double>& grid);
std::vector<Vector> derivative_along_path(const std::vector<Matrix>& w_on_grid,
                                          const std::function<Vector(double)>& v,
                                          const std::vector<double>& grid);

}  // namespace pathframes
