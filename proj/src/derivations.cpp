#include "pathframes/derivations.hpp"

#include "pathframes/errors.hpp"

#include <random>

namespace pathframes {

ConnectionField::ConnectionField(CoefficientMap coeffs) : coeffs_(std::move(coeffs)) {
  if (!coeffs_) throw ArgumentError("connection coefficient map must be callable");
}

Tensor3 ConnectionField::operator()(const Vector& x) const {
  Tensor3 g = coeffs_(x);
  if (g.dim() != x.size()) throw ArgumentError("connection coefficients have the wrong dimension");
  if (!g.all_finite()) throw EvaluationError("connection coefficients are not finite");
  return g;
}

std::vector<Matrix> ConnectionField::direction_matrices(const Vector& x) const {
  const Tensor3 g = (*this)(x);
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(g.dim()));
  for (int k = 0; k < g.dim(); ++k) out.push_back(g.slice_last(k));
  return out;
}

ConnectionField ConnectionField::flat(int n) {
  return ConnectionField([n](const Vector&) { return Tensor3(n); });
}

SDerivationField SDerivationField::from_connection(ConnectionField conn, ChartDomain chart,
                                                   double h) {
  SDerivationField s;
  s.linearity = Linearity::Linear;
  s.s_of = [conn = std::move(conn), chart = std::move(chart), h](const VectorField& field,
                                                                  const Vector& x) -> Matrix {
    const double step = h > 0.0 ? h : default_step(x);
    Matrix out = finite_difference_vector_jacobian(field, chart, x, step);
    const Vector xv = field(x);
    const Tensor3 g = conn(x);
    for (int k = 0; k < g.dim(); ++k) out += g.slice_last(k) * xv[k];
    return out;
  };
  return s;
}

double linearity_violation(const SDerivationField& s, const ChartDomain& chart, int samples,
                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> frac(0.1, 0.9);
  const int n = chart.dim();
  double worst = 0.0;
  for (int trial = 0; trial < samples; ++trial) {
    Vector x(n), cx(n), cy(n);
    for (int i = 0; i < n; ++i) {
      x[i] = chart.lower()[i] + frac(rng) * (chart.upper()[i] - chart.lower()[i]);
      cx[i] = unit(rng);
      cy[i] = unit(rng);
    }
    const double a = unit(rng);
    const double b = unit(rng);
    const Vector cz = a * cx + b * cy;
    const Matrix lhs = s.s_of([cz](const Vector&) -> Vector { return cz; }, x);
    const Matrix rhs = a * s.s_of([cx](const Vector&) -> Vector { return cx; }, x) +
                       b * s.s_of([cy](const Vector&) -> Vector { return cy; }, x);
    worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
  }
  return worst;
}

Matrix derivation_components(const SDerivationField& s, const VectorField& x_field,
                             const FrameField& frame, const ChartDomain& chart, const Vector& x,
                             double h) {
  const Matrix a = frame(x);
  const Eigen::PartialPivLU<Matrix> lu(a);
  const Matrix s_coord = s.s_of(x_field, x);
  if (!s_coord.allFinite()) throw EvaluationError("S_X has non-finite components");

  const Matrix s_frame = lu.solve(s_coord * a);
  // d_m of the frame components of X; E_j(X^i) = A^m_j d_m X^i.
  const Matrix dx = finite_difference_vector_jacobian(
      [&](const Vector& p) -> Vector { return frame(p).partialPivLu().solve(x_field(p)); }, chart,
      x, h);
  const Matrix directional = dx * a;
  const Tensor3 c = commutation_coefficients(frame, chart, x, h);
  const Vector xf = lu.solve(x_field(x));

  const int n = static_cast<int>(x.size());
  Matrix w = s_frame - directional;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) w(i, j) += c(i, k, j) * xf[k];
  return w;
}

Tensor3 connection_in_frame(const ConnectionField& conn, const FrameField& frame,
                            const ChartDomain& chart, const Vector& x, double h) {
  const int n = static_cast<int>(x.size());
  const Matrix a = frame(x);
  const Eigen::PartialPivLU<Matrix> lu(a);
  const auto gamma = conn.direction_matrices(x);
  const auto da = finite_difference_jacobian([&frame](const Vector& p) { return frame(p); },
                                             chart, x, h);
  std::vector<Matrix> per_coord(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m)
    per_coord[static_cast<std::size_t>(m)] =
        gamma[static_cast<std::size_t>(m)] * a + da[static_cast<std::size_t>(m)];

  Tensor3 out(n);
  for (int k = 0; k < n; ++k) {
    Matrix sum = Matrix::Zero(n, n);
    for (int m = 0; m < n; ++m) sum += a(m, k) * per_coord[static_cast<std::size_t>(m)];
    out.set_slice_last(k, lu.solve(sum));
  }
  return out;
}

Matrix connection_components(const ConnectionField& conn, const Vector& x_frame,
                             const FrameField& frame, const ChartDomain& chart, const Vector& x,
                             double h) {
  if (x_frame.size() != x.size()) throw ArgumentError("X has the wrong number of components");
  const Tensor3 g = connection_in_frame(conn, frame, chart, x, h);
  Matrix w = Matrix::Zero(g.dim(), g.dim());
  for (int k = 0; k < g.dim(); ++k) w += g.slice_last(k) * x_frame[k];
  return w;
}

Matrix transform_components(const Matrix& w, const Matrix& a, const Matrix& xa) {
  require_invertible(a, "transition matrix");
  if (w.rows() != a.rows() || xa.rows() != a.rows() || xa.cols() != a.cols())
    throw ArgumentError("component matrices have inconsistent sizes");
  return a.partialPivLu().solve(w * a + xa);
}

namespace {

Vector contract_torsion(const Matrix& wx, const Matrix& wy, const Tensor3& c, const Vector& xf,
                        const Vector& yf) {
  Vector t = wx * yf - wy * xf;
  const int n = c.dim();
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) t[i] -= c(i, k, l) * xf[k] * yf[l];
  return t;
}

}  // namespace

Vector torsion_of_derivation(const SDerivationField& s, const VectorField& x_field,
                             const VectorField& y_field, const FrameField& frame,
                             const ChartDomain& chart, const Vector& x, double h) {
  const Matrix a = frame(x);
  const Eigen::PartialPivLU<Matrix> lu(a);
  const Matrix wx = derivation_components(s, x_field, frame, chart, x, h);
  const Matrix wy = derivation_components(s, y_field, frame, chart, x, h);
  const Tensor3 c = commutation_coefficients(frame, chart, x, h);
  return contract_torsion(wx, wy, c, lu.solve(x_field(x)), lu.solve(y_field(x)));
}

Vector torsion_of_derivation(const ConnectionField& conn, const VectorField& x_field,
                             const VectorField& y_field, const FrameField& frame,
                             const ChartDomain& chart, const Vector& x, double h) {
  const Matrix a = frame(x);
  const Eigen::PartialPivLU<Matrix> lu(a);
  const Vector xf = lu.solve(x_field(x));
  const Vector yf = lu.solve(y_field(x));
  const Tensor3 g = connection_in_frame(conn, frame, chart, x, h);
  const int n = g.dim();
  Matrix wx = Matrix::Zero(n, n);
  Matrix wy = Matrix::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    wx += g.slice_last(k) * xf[k];
    wy += g.slice_last(k) * yf[k];
  }
  const Tensor3 c = commutation_coefficients(frame, chart, x, h);
  return contract_torsion(wx, wy, c, xf, yf);
}

Tensor3 torsion_tensor(const ConnectionField& conn, const FrameField& frame,
                       const ChartDomain& chart, const Vector& x, double h) {
  const Tensor3 g = connection_in_frame(conn, frame, chart, x, h);
  const Tensor3 c = commutation_coefficients(frame, chart, x, h);
  const int n = g.dim();
  Tensor3 t(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) t(i, k, l) = -(g(i, k, l) - g(i, l, k)) - c(i, k, l);
  return t;
}

}  // namespace pathframes
