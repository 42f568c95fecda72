#include "leglab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "leglab/errors.hpp"

namespace leglab {

LaurentBasis LaurentBasis::fitted(const std::vector<Complex>& points, int poly_degree,
                                  const std::vector<Complex>& centers, const std::vector<int>& pole_degree) {
  require(poly_degree >= 0, "polynomial degree must be non-negative");
  require(pole_degree.size() == centers.size(), "one pole degree per center is required");
  LaurentBasis b;
  b.poly_degree = poly_degree;
  b.centers = centers;
  b.pole_degree = pole_degree;
  double s = 0.0;
  for (auto p : points) s = std::max(s, std::abs(p));
  b.scale = std::max(s, 1e-3);
  for (auto c : centers) {
    double r = 1e300;
    for (auto p : points) r = std::min(r, std::abs(p - c));
    b.pole_scale.push_back(points.empty() ? 1.0 : r);
  }
  return b;
}

int LaurentBasis::size() const {
  int n = poly_degree + 1;
  for (int d : pole_degree) n += d;
  return n;
}

Eigen::RowVectorXcd LaurentBasis::row(Complex z, int order) const {
  Eigen::RowVectorXcd r(size());
  // (z/s)^k derivative: k!/(k-d)! z^{k-d} / s^k
  const Complex w = z / scale;
  for (int k = 0; k <= poly_degree; ++k) {
    if (k < order) {
      r(k) = 0.0;
      continue;
    }
    double falling = 1.0;
    for (int i = 0; i < order; ++i) falling *= (k - i);
    r(k) = falling * std::pow(w, k - order) / std::pow(scale, order);
  }
  int col = poly_degree + 1;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const Complex u = pole_scale[i] / (z - centers[i]);
    for (int k = 1; k <= pole_degree[i]; ++k) {
      // d^order/dz^order (r/(z-c))^k = (-1)^order k(k+1)..(k+order-1) u^{k+order} / r^order
      double rising = 1.0;
      for (int j = 0; j < order; ++j) rising *= (k + j);
      const double sign = (order % 2 == 0) ? 1.0 : -1.0;
      r(col++) = sign * rising * std::pow(u, k + order) / std::pow(pole_scale[i], order);
    }
  }
  return r;
}

LaurentPoly LaurentBasis::to_laurent(const Eigen::VectorXcd& coeffs) const {
  require(coeffs.size() == size(), "coefficient vector does not match the basis");
  std::vector<Complex> poly(poly_degree + 1);
  for (int k = 0; k <= poly_degree; ++k) poly[k] = coeffs(k) / std::pow(scale, k);
  std::vector<std::vector<Complex>> poles(centers.size());
  int col = poly_degree + 1;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    for (int k = 1; k <= pole_degree[i]; ++k) poles[i].push_back(coeffs(col++) * std::pow(pole_scale[i], k));
  }
  return LaurentPoly::from_dense(centers, std::move(poly), std::move(poles));
}

ConstrainedLSResult constrained_lstsq(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& b, const Eigen::MatrixXcd& C,
                                      const Eigen::VectorXcd& d, double lambda) {
  const Eigen::Index n = std::max(A.cols(), C.cols());
  require(A.rows() == 0 || A.cols() == n, "least-squares matrix has the wrong width");
  require(C.rows() == 0 || C.cols() == n, "constraint matrix has the wrong width");
  require(A.rows() == b.size() && C.rows() == d.size(), "right-hand side size mismatch");
  if (C.rows() > n) {
    std::ostringstream os;
    os << C.rows() << " constraint rows exceed basis dimension " << n;
    fail(ErrorKind::BasisTooSmall, os.str());
  }
  ConstrainedLSResult res;
  Eigen::VectorXcd xp = Eigen::VectorXcd::Zero(n);
  Eigen::MatrixXcd null_basis;
  Eigen::MatrixXcd Cs = C;
  Eigen::VectorXcd ds = d;
  Eigen::JacobiSVD<Eigen::MatrixXcd> csvd;
  if (C.rows() > 0) {
    // row equilibration
    for (Eigen::Index i = 0; i < C.rows(); ++i) {
      const double m = Cs.row(i).cwiseAbs().maxCoeff();
      if (m > 0) {
        Cs.row(i) /= m;
        ds(i) /= m;
      }
    }
    csvd.compute(Cs, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& svd = csvd;
    const auto& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    const Eigen::Index r = C.rows();
    if (smax == 0.0 || sv(r - 1) < 1e-11 * smax) {
      std::ostringstream os;
      os << "constraint matrix is rank deficient (sigma_min/sigma_max = " << (smax > 0 ? sv(r - 1) / smax : 0.0) << ")";
      fail(ErrorKind::InfeasibleConstraints, os.str());
    }
    const Eigen::MatrixXcd& V = svd.matrixV();
    Eigen::VectorXcd coeff = svd.matrixU().adjoint() * ds;
    for (Eigen::Index i = 0; i < r; ++i) xp += V.col(i) * (coeff(i) / sv(i));
    null_basis = V.rightCols(n - r);
  } else {
    null_basis = Eigen::MatrixXcd::Identity(n, n);
  }
  if (null_basis.cols() > 0 && (A.rows() > 0 || lambda > 0.0)) {
    const Eigen::Index m = A.rows();
    const Eigen::Index extra = lambda > 0.0 ? n : 0;
    Eigen::MatrixXcd M(m + extra, null_basis.cols());
    Eigen::VectorXcd rhs(m + extra);
    if (m > 0) {
      M.topRows(m) = A * null_basis;
      rhs.head(m) = b - A * xp;
    }
    if (extra > 0) {
      const double sl = std::sqrt(lambda);
      M.bottomRows(n) = sl * null_basis;
      rhs.tail(n) = -sl * xp;
    }
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    res.condition = sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
    svd.setThreshold(1e-14);
    xp += null_basis * svd.solve(rhs);
  }
  if (C.rows() > 0) {
    // iterative refinement in the row space of C; the null-space part is untouched
    const Eigen::Index r = C.rows();
    const auto& sv = csvd.singularValues();
    for (int it = 0; it < 3; ++it) {
      const Eigen::VectorXcd coeff = csvd.matrixU().adjoint() * (ds - Cs * xp);
      for (Eigen::Index i = 0; i < r; ++i) xp += csvd.matrixV().col(i) * (coeff(i) / sv(i));
    }
  }
  res.x = xp;
  if (C.rows() > 0) res.constraint_residual = (C * xp - d).cwiseAbs().maxCoeff();
  if (A.rows() > 0) res.fit_residual = (A * xp - b).cwiseAbs().maxCoeff();
  return res;
}

}  // namespace leglab
