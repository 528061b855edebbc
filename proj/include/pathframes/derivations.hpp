#pragma once

#include "pathframes/geometry.hpp"

#include <cstdint>

namespace pathframes {

/// Linear connection given by its coordinate coefficients Gamma^i_{jk}(x),
/// with nabla_X(E_j) = Gamma^i_{jk} X^k E_i: j is the differentiated
/// vector, k the direction.
class ConnectionField {
 public:
  using CoefficientMap = std::function<Tensor3(const Vector&)>;

  explicit ConnectionField(CoefficientMap coeffs);

  /// Throws EvaluationError on non-finite coefficients.
  Tensor3 operator()(const Vector& x) const;

  /// Gamma_k as matrices (Gamma_k)^i_j = Gamma^i_{jk}, one per direction k.
  std::vector<Matrix> direction_matrices(const Vector& x) const;

  static ConnectionField flat(int n);

 private:
  CoefficientMap coeffs_;
};

/// S-derivation D_X = L_X + S_X. s_of(X, x) returns the coordinate
/// components (S_X)^i_j of the (1,1) tensor S_X at x.
struct SDerivationField {
  enum class Linearity { Linear, General };

  std::function<Matrix(const VectorField&, const Vector&)> s_of;
  Linearity linearity = Linearity::General;

  /// S_X = nabla_X - L_X, i.e. (S_X)^i_j = d_j X^i + Gamma^i_{jk} X^k.
  /// The derivative of X is taken by central differences with step h
  /// (h <= 0 selects default_step).
  static SDerivationField from_connection(ConnectionField conn, ChartDomain chart, double h = 0.0);
};

/// Spot-checks s_of(aX + bY) = a s_of(X) + b s_of(Y) on random constant
/// fields; returns the largest violation seen.
double linearity_violation(const SDerivationField& s, const ChartDomain& chart, int samples,
                           std::uint64_t seed);

/// Components (W_X)^i_j = (S_X)^i_j - E_j(X^i) + C^i_{kj} X^k in the frame.
///
/// X^i are frame components A^{-1} X and E_j(f) = A^m_j d_m f.
Matrix derivation_components(const SDerivationField& s, const VectorField& x_field,
                             const FrameField& frame, const ChartDomain& chart, const Vector& x,
                             double h);

/// Connection coefficients expressed in the frame:
/// Gamma'^i_{jk} = [A^{-1} (Gamma_m A + d_m A) A^m_k]^i_j.
Tensor3 connection_in_frame(const ConnectionField& conn, const FrameField& frame,
                            const ChartDomain& chart, const Vector& x, double h);

/// W_X = Gamma'_k X^k, with X given by its frame components at x.
Matrix connection_components(const ConnectionField& conn, const Vector& x_frame,
                             const FrameField& frame, const ChartDomain& chart, const Vector& x,
                             double h);

/// Change of frame W' = A^{-1} (W A + X(A)).
///
/// This is the index form of the law; the compact matrix form sometimes
/// written as A^{-1} W A + X(A) drops the A^{-1} on the derivative term.
Matrix transform_components(const Matrix& w, const Matrix& a, const Matrix& xa);

/// Torsion operator T(X, Y)^i = (W_X)^i_l Y^l - (W_Y)^i_l X^l - C^i_{kl} X^k Y^l
/// in frame components, with W from derivation_components.
Vector torsion_of_derivation(const SDerivationField& s, const VectorField& x_field,
                             const VectorField& y_field, const FrameField& frame,
                             const ChartDomain& chart, const Vector& x, double h);

/// Same operator for a connection, where W_X = Gamma'_k X^k.
Vector torsion_of_derivation(const ConnectionField& conn, const VectorField& x_field,
                             const VectorField& y_field, const FrameField& frame,
                             const ChartDomain& chart, const Vector& x, double h);

/// T^i_{kl} = -(Gamma'^i_{kl} - Gamma'^i_{lk}) - C^i_{kl} in the frame.
///
/// Note the overall sign: with Gamma^i_{jk} indexed as above this is the
/// convention under which T(X, Y) = nabla_X Y - nabla_Y X - [X, Y] equals
/// T^i_{kl} X^k Y^l.
Tensor3 torsion_tensor(const ConnectionField& conn, const FrameField& frame,
                       const ChartDomain& chart, const Vector& x, double h);

}  // namespace pathframes
