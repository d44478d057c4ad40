#include "gaugelab/fields.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

#include <Eigen/Eigenvalues>

#include "gaugelab/error.hpp"
#include "gaugelab/grid_io.hpp"

namespace gaugelab {

// ---------------------------------------------------------------------------
// base classes

Mat PotentialSource::divergence(const Vec2& x) const {
  const double h = kGradientStep;
  PotentialSample p, q;
  evaluate(x + Vec2(h, 0.0), p);
  evaluate(x - Vec2(h, 0.0), q);
  Mat div = (p.A[0] - q.A[0]) / (2.0 * h);
  evaluate(x + Vec2(0.0, h), p);
  evaluate(x - Vec2(0.0, h), q);
  div += (p.A[1] - q.A[1]) / (2.0 * h);
  return div;
}

MatrixPotential::MatrixPotential(std::shared_ptr<const PotentialSource> source, bool hermitian)
    : source_(std::move(source)), m_(source_->channels()), hermitian_(hermitian) {
  if (m_ < 1) throw Error(ErrorKind::InvalidArgument, "channel count must be positive");
}

PotentialSample MatrixPotential::operator()(const Vec2& x) const {
  PotentialSample s;
  source_->evaluate(x, s);
  return s;
}

Mat MatrixPotential::connection(const Vec2& x, const Vec2& v) const {
  PotentialSample s;
  source_->evaluate(x, s);
  return v.x() * s.A[0] + v.y() * s.A[1];
}

void GaugeSource::gradient(const Vec2& x, std::array<Mat, 2>& out) const {
  const double h = kGradientStep;
  out[0] = (value(x + Vec2(h, 0.0)) - value(x - Vec2(h, 0.0))) / (2.0 * h);
  out[1] = (value(x + Vec2(0.0, h)) - value(x - Vec2(0.0, h))) / (2.0 * h);
}

GaugeElement::GaugeElement(std::shared_ptr<const GaugeSource> source, bool is_g0, bool unitary)
    : source_(std::move(source)), m_(source_->channels()), is_g0_(is_g0), unitary_(unitary) {}

namespace {

void guard_det(const Mat& g, const Vec2& x) {
  const Complex det = g.rows() == 1 ? g(0, 0) : g.determinant();
  if (!(std::abs(det) > kDetGuard)) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "|det g| = %.3e at (%.6g, %.6g)", std::abs(det), x.x(), x.y());
    throw Error(ErrorKind::SingularGauge, buf);
  }
}

}  // namespace

Mat GaugeElement::value(const Vec2& x) const {
  Mat g = source_->value(x);
  guard_det(g, x);
  return g;
}

Mat GaugeElement::inverse(const Vec2& x) const { return value(x).inverse(); }

std::array<Mat, 2> GaugeElement::gradient(const Vec2& x) const {
  std::array<Mat, 2> d;
  source_->gradient(x, d);
  return d;
}

// ---------------------------------------------------------------------------
// gauge action and gauge algebra

namespace {

class TransformedPotential final : public PotentialSource {
 public:
  TransformedPotential(MatrixPotential pot, GaugeElement g)
      : pot_(std::move(pot)), g_(std::move(g)) {}

  int channels() const override { return pot_.channels(); }

  void evaluate(const Vec2& x, PotentialSample& out) const override {
    PotentialSample base;
    pot_.evaluate(x, base);
    const Mat g = g_.value(x);
    const Mat ginv = g.inverse();
    const auto dg = g_.gradient(x);
    for (int j = 0; j < 2; ++j) out.A[j] = ginv * base.A[j] * g - kI * (ginv * dg[j]);
    out.V = ginv * base.V * g;
  }

  std::string describe() const override {
    return "gauge_transform(" + pot_.describe() + ", " + g_.describe() + ")";
  }
  std::string representation() const override { return pot_.representation(); }

 private:
  MatrixPotential pot_;
  GaugeElement g_;
};

class ProductGauge final : public GaugeSource {
 public:
  ProductGauge(GaugeElement a, GaugeElement b) : a_(std::move(a)), b_(std::move(b)) {}
  int channels() const override { return a_.channels(); }
  Mat value(const Vec2& x) const override { return a_.value(x) * b_.value(x); }
  void gradient(const Vec2& x, std::array<Mat, 2>& out) const override {
    const Mat ga = a_.value(x);
    const Mat gb = b_.value(x);
    const auto da = a_.gradient(x);
    const auto db = b_.gradient(x);
    for (int j = 0; j < 2; ++j) out[j] = da[j] * gb + ga * db[j];
  }
  std::string describe() const override {
    return "product(" + a_.describe() + ", " + b_.describe() + ")";
  }

 private:
  GaugeElement a_, b_;
};

class InverseGauge final : public GaugeSource {
 public:
  explicit InverseGauge(GaugeElement g) : g_(std::move(g)) {}
  int channels() const override { return g_.channels(); }
  Mat value(const Vec2& x) const override { return g_.inverse(x); }
  void gradient(const Vec2& x, std::array<Mat, 2>& out) const override {
    const Mat ginv = g_.inverse(x);
    const auto d = g_.gradient(x);
    for (int j = 0; j < 2; ++j) out[j] = -ginv * d[j] * ginv;
  }
  std::string describe() const override { return "inverse(" + g_.describe() + ")"; }

 private:
  GaugeElement g_;
};

}  // namespace

MatrixPotential gauge_transform(const MatrixPotential& pot, const GaugeElement& g) {
  if (pot.channels() != g.channels())
    throw Error(ErrorKind::ShapeMismatch, "potential and gauge have different channel counts");
  return MatrixPotential(std::make_shared<TransformedPotential>(pot, g),
                         pot.hermitian() && g.unitary());
}

GaugeElement gauge_product(const GaugeElement& g, const GaugeElement& h) {
  if (g.channels() != h.channels())
    throw Error(ErrorKind::ShapeMismatch, "gauge product of different channel counts");
  return GaugeElement(std::make_shared<ProductGauge>(g, h), g.is_g0() && h.is_g0(),
                      g.unitary() && h.unitary());
}

GaugeElement gauge_inverse(const GaugeElement& g) {
  return GaugeElement(std::make_shared<InverseGauge>(g), g.is_g0(), g.unitary());
}

G0Check check_g0(const GaugeElement& g, const Domain& domain, int n_samples) {
  if (n_samples < 1) throw Error(ErrorKind::InvalidArgument, "n_samples must be positive");
  G0Check out;
  const Curve& outer = domain.outer();
  const Mat eye = Mat::Identity(g.channels(), g.channels());
  for (int k = 0; k < n_samples; ++k) {
    const Vec2 x = outer.point(outer.length() * k / n_samples);
    out.max_deviation = std::max(out.max_deviation, op_norm(g.value(x) - eye));
  }
  out.is_g0 = out.max_deviation <= 1e-10;
  return out;
}

// ---------------------------------------------------------------------------
// bump

double bump_value(const Vec2& x, const Vec2& center, double radius) {
  const double q = (x - center).squaredNorm() / (radius * radius);
  if (q >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - q));
}

Vec2 bump_gradient(const Vec2& x, const Vec2& center, double radius) {
  const double q = (x - center).squaredNorm() / (radius * radius);
  if (q >= 1.0) return Vec2::Zero();
  const double b = std::exp(1.0 - 1.0 / (1.0 - q));
  return -b / ((1.0 - q) * (1.0 - q)) * 2.0 * (x - center) / (radius * radius);
}

// ---------------------------------------------------------------------------
// builtin potentials

namespace {

Mat make_traceless(Mat a) {
  const int m = static_cast<int>(a.rows());
  a -= (a.trace() / static_cast<double>(m)) * Mat::Identity(m, m);
  return a;
}

Mat seeded_matrix(SeededRng& rng, int m, bool hermitian, bool traceless) {
  Mat a = hermitian ? rng.hermitian_matrix(m) : rng.complex_matrix(m);
  return traceless && m > 1 ? make_traceless(std::move(a)) : a;
}

class ZeroPotential final : public PotentialSource {
 public:
  explicit ZeroPotential(int m) : m_(m) {}
  int channels() const override { return m_; }
  void evaluate(const Vec2&, PotentialSample& out) const override {
    out.A[0] = out.A[1] = out.V = Mat::Zero(m_, m_);
  }
  Mat divergence(const Vec2&) const override { return Mat::Zero(m_, m_); }
  std::string describe() const override { return "zero(m=" + std::to_string(m_) + ")"; }

 private:
  int m_;
};

class ConstantPotential final : public PotentialSource {
 public:
  ConstantPotential(Mat a1, Mat a2, Mat v) : a1_(std::move(a1)), a2_(std::move(a2)), v_(std::move(v)) {}
  int channels() const override { return static_cast<int>(a1_.rows()); }
  void evaluate(const Vec2&, PotentialSample& out) const override {
    out.A[0] = a1_;
    out.A[1] = a2_;
    out.V = v_;
  }
  Mat divergence(const Vec2&) const override { return Mat::Zero(a1_.rows(), a1_.cols()); }
  std::string describe() const override { return "constant"; }

 private:
  Mat a1_, a2_, v_;
};

class VortexPotential final : public PotentialSource {
 public:
  VortexPotential(double alpha, Vec2 center) : alpha_(alpha), c_(std::move(center)) {}
  int channels() const override { return 1; }
  void evaluate(const Vec2& x, PotentialSample& out) const override {
    const Vec2 r = x - c_;
    const double r2 = r.squaredNorm();
    out.A[0] = Mat::Constant(1, 1, -alpha_ * r.y() / r2);
    out.A[1] = Mat::Constant(1, 1, alpha_ * r.x() / r2);
    out.V = Mat::Zero(1, 1);
  }
  Mat divergence(const Vec2&) const override { return Mat::Zero(1, 1); }
  std::string describe() const override {
    char buf[128];
    std::snprintf(buf, sizeof buf, "ab_vortex(alpha=%.17g, center=(%.17g, %.17g))", alpha_,
                  c_.x(), c_.y());
    return buf;
  }

 private:
  double alpha_;
  Vec2 c_;
};

class BumpPotential final : public PotentialSource {
 public:
  BumpPotential(Vec2 center, double radius, double amplitude, std::array<Mat, 3> mats)
      : c_(std::move(center)), r_(radius), amp_(amplitude), mats_(std::move(mats)) {}
  int channels() const override { return static_cast<int>(mats_[0].rows()); }
  void evaluate(const Vec2& x, PotentialSample& out) const override {
    const double b = amp_ * bump_value(x, c_, r_);
    out.A[0] = b * mats_[0];
    out.A[1] = b * mats_[1];
    out.V = b * mats_[2];
  }
  Mat divergence(const Vec2& x) const override {
    const Vec2 g = amp_ * bump_gradient(x, c_, r_);
    return g.x() * mats_[0] + g.y() * mats_[1];
  }
  std::string describe() const override { return "bump"; }

 private:
  Vec2 c_;
  double r_, amp_;
  std::array<Mat, 3> mats_;
};

// sum over modes (p, q) of C cos(p x + q y) + S sin(p x + q y), weighted by
// 1 / (1 + p^2 + q^2)
class TrigPotential final : public PotentialSource {
 public:
  struct Mode {
    double p, q, weight;
    std::array<Mat, 3> c, s;
  };
  TrigPotential(int m, std::vector<Mode> modes) : m_(m), modes_(std::move(modes)) {}
  int channels() const override { return m_; }
  void evaluate(const Vec2& x, PotentialSample& out) const override {
    out.A[0] = out.A[1] = out.V = Mat::Zero(m_, m_);
    for (const auto& md : modes_) {
      const double ph = md.p * x.x() + md.q * x.y();
      const double cs = md.weight * std::cos(ph);
      const double sn = md.weight * std::sin(ph);
      out.A[0] += cs * md.c[0] + sn * md.s[0];
      out.A[1] += cs * md.c[1] + sn * md.s[1];
      out.V += cs * md.c[2] + sn * md.s[2];
    }
  }
  Mat divergence(const Vec2& x) const override {
    Mat div = Mat::Zero(m_, m_);
    for (const auto& md : modes_) {
      const double ph = md.p * x.x() + md.q * x.y();
      const double cs = md.weight * std::cos(ph);
      const double sn = md.weight * std::sin(ph);
      div += md.p * (-sn * md.c[0] + cs * md.s[0]) + md.q * (-sn * md.c[1] + cs * md.s[1]);
    }
    return div;
  }
  std::string describe() const override { return "random_smooth"; }

 private:
  int m_;
  std::vector<Mode> modes_;
};

bool vortex_core_in_obstacle(const Vec2& c, const Domain& domain) {
  for (int j = 1; j <= domain.obstacle_count(); ++j)
    if (domain.curve(j).encloses(c)) return true;
  return false;
}

}  // namespace

MatrixPotential builtin_potential(const PotentialSpec& spec, const Domain* domain) {
  const int m = spec.m;
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "potential channel count must be >= 1");
  if (spec.name == "zero") return MatrixPotential(std::make_shared<ZeroPotential>(m), true);

  if (spec.name == "constant") {
    std::array<Mat, 3> mats;
    if (!spec.matrices.empty()) {
      if (spec.matrices.size() != 3)
        throw Error(ErrorKind::InvalidArgument, "constant potential needs A1, A2, V");
      for (int i = 0; i < 3; ++i) {
        mats[i] = spec.matrices[i];
        if (mats[i].rows() != m || mats[i].cols() != m)
          throw Error(ErrorKind::ShapeMismatch, "constant potential matrix is not m x m");
      }
    } else {
      SeededRng rng(spec.seed);
      for (auto& a : mats) a = spec.amplitude * seeded_matrix(rng, m, spec.hermitian, spec.traceless);
    }
    const bool herm = hermitian_defect(mats[0]) <= 1e-12 && hermitian_defect(mats[1]) <= 1e-12 &&
                      hermitian_defect(mats[2]) <= 1e-12;
    return MatrixPotential(std::make_shared<ConstantPotential>(mats[0], mats[1], mats[2]), herm);
  }

  if (spec.name == "ab_vortex") {
    if (m != 1) throw Error(ErrorKind::InvalidArgument, "ab_vortex is a scalar (m = 1) potential");
    if (domain && !vortex_core_in_obstacle(spec.center, *domain))
      throw Error(ErrorKind::VortexCenterInDomain,
                  "vortex core must lie strictly inside an obstacle");
    return MatrixPotential(std::make_shared<VortexPotential>(spec.alpha, spec.center), true);
  }

  if (spec.name == "bump") {
    if (!(spec.radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "bump radius must be > 0");
    SeededRng rng(spec.seed);
    std::array<Mat, 3> mats;
    for (auto& a : mats) a = seeded_matrix(rng, m, spec.hermitian, spec.traceless);
    return MatrixPotential(
        std::make_shared<BumpPotential>(spec.center, spec.radius, spec.amplitude, mats),
        spec.hermitian);
  }

  if (spec.name == "random_smooth") {
    if (spec.order < 0) throw Error(ErrorKind::InvalidArgument, "order must be >= 0");
    SeededRng rng(spec.seed);
    std::vector<TrigPotential::Mode> modes;
    for (int p = 0; p <= spec.order; ++p) {
      for (int q = -spec.order; q <= spec.order; ++q) {
        if (p == 0 && q < 0) continue;
        TrigPotential::Mode md;
        md.p = p;
        md.q = q;
        md.weight = spec.amplitude / (1.0 + p * p + q * q);
        for (auto& a : md.c) a = seeded_matrix(rng, m, spec.hermitian, spec.traceless);
        for (auto& a : md.s) a = seeded_matrix(rng, m, spec.hermitian, spec.traceless);
        modes.push_back(std::move(md));
      }
    }
    return MatrixPotential(std::make_shared<TrigPotential>(m, std::move(modes)), spec.hermitian);
  }

  if (spec.name == "grid") {
    GridData data = read_potential_grid(spec.file);
    return grid_potential(std::move(data));
  }

  throw Error(ErrorKind::UnknownKind, "unknown builtin potential '" + spec.name + "'");
}

// ---------------------------------------------------------------------------
// builtin gauges: products of exp(rho_k(x) K_k) times a constant

namespace {

struct ScalarField {
  enum class Kind { Bump, Trig, Product } kind = Kind::Bump;
  Vec2 center{0.0, 0.0};
  double radius = 1.0;
  double scale = 1.0;
  // trig: sum_k a_k cos(p_k x + q_k y) + b_k sin(...)
  std::vector<std::array<double, 4>> terms;

  double value(const Vec2& x) const {
    switch (kind) {
      case Kind::Bump: return scale * bump_value(x, center, radius);
      case Kind::Product: return scale * x.x() * x.y();
      case Kind::Trig: {
        double v = 0.0;
        for (const auto& t : terms) {
          const double ph = t[2] * x.x() + t[3] * x.y();
          v += t[0] * std::cos(ph) + t[1] * std::sin(ph);
        }
        return scale * v;
      }
    }
    return 0.0;
  }

  Vec2 gradient(const Vec2& x) const {
    switch (kind) {
      case Kind::Bump: return scale * bump_gradient(x, center, radius);
      case Kind::Product: return scale * Vec2(x.y(), x.x());
      case Kind::Trig: {
        Vec2 g = Vec2::Zero();
        for (const auto& t : terms) {
          const double ph = t[2] * x.x() + t[3] * x.y();
          const double d = -t[0] * std::sin(ph) + t[1] * std::cos(ph);
          g += d * Vec2(t[2], t[3]);
        }
        return scale * g;
      }
    }
    return Vec2::Zero();
  }
};

// exp(rho K) with K = P diag(lambda) P^{-1} diagonalized once
struct ExpFactor {
  ScalarField rho;
  Mat k, p, p_inv;
  CVec lambda;

  static ExpFactor make(ScalarField rho, const Mat& k) {
    ExpFactor f;
    f.rho = std::move(rho);
    f.k = k;
    if (hermitian_defect(kI * k) <= 1e-14 || hermitian_defect(k) <= 1e-14) {
      // skew-hermitian or hermitian: unitary diagonalization
      const bool skew = hermitian_defect(kI * k) <= 1e-14;
      Eigen::SelfAdjointEigenSolver<Mat> es(skew ? Mat(kI * k) : k);
      f.p = es.eigenvectors();
      f.p_inv = f.p.adjoint();
      f.lambda = es.eigenvalues().cast<Complex>();
      if (skew) f.lambda *= -kI;
    } else {
      Eigen::ComplexEigenSolver<Mat> es(k);
      f.p = es.eigenvectors();
      f.p_inv = f.p.inverse();
      f.lambda = es.eigenvalues();
    }
    return f;
  }

  Mat value(const Vec2& x) const {
    const double r = rho.value(x);
    CVec e = (r * lambda).array().exp();
    return p * e.asDiagonal() * p_inv;
  }
};

class ExpProductGauge final : public GaugeSource {
 public:
  ExpProductGauge(int m, std::vector<ExpFactor> factors, Mat right, std::string name)
      : m_(m), factors_(std::move(factors)), right_(std::move(right)), name_(std::move(name)) {}

  int channels() const override { return m_; }

  Mat value(const Vec2& x) const override {
    Mat g = Mat::Identity(m_, m_);
    for (const auto& f : factors_) g = g * f.value(x);
    return g * right_;
  }

  void gradient(const Vec2& x, std::array<Mat, 2>& out) const override {
    const std::size_t n = factors_.size();
    std::vector<Mat> vals(n);
    for (std::size_t k = 0; k < n; ++k) vals[k] = factors_[k].value(x);
    out[0] = out[1] = Mat::Zero(m_, m_);
    for (std::size_t k = 0; k < n; ++k) {
      Mat left = Mat::Identity(m_, m_);
      for (std::size_t i = 0; i < k; ++i) left = left * vals[i];
      Mat rest = factors_[k].k * vals[k];
      for (std::size_t i = k + 1; i < n; ++i) rest = rest * vals[i];
      rest = rest * right_;
      const Vec2 dr = factors_[k].rho.gradient(x);
      const Mat term = left * rest;
      out[0] += dr.x() * term;
      out[1] += dr.y() * term;
    }
  }

  std::string describe() const override { return name_; }

 private:
  int m_;
  std::vector<ExpFactor> factors_;
  Mat right_;
  std::string name_;
};

Mat seeded_generator(SeededRng& rng, int m, bool unitary) {
  // i H generates unitary factors; a general complex K generates GL(m, C)
  return unitary ? Mat(kI * rng.hermitian_matrix(m)) : rng.complex_matrix(m);
}

}  // namespace

GaugeElement builtin_gauge(const GaugeSpec& spec) {
  const int m = spec.m;
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "gauge channel count must be >= 1");
  const Mat eye = Mat::Identity(m, m);

  if (spec.name == "identity")
    return GaugeElement(std::make_shared<ExpProductGauge>(m, std::vector<ExpFactor>{}, eye,
                                                          "identity"),
                        true, true);

  if (spec.name == "constant") {
    SeededRng rng(spec.seed);
    ScalarField one;
    one.kind = ScalarField::Kind::Trig;
    one.terms = {{1.0, 0.0, 0.0, 0.0}};
    one.scale = spec.amplitude;
    std::vector<ExpFactor> f{ExpFactor::make(one, seeded_generator(rng, m, spec.unitary))};
    const auto src = std::make_shared<ExpProductGauge>(m, std::move(f), eye, "constant");
    // bake the constant into a right factor so the gradient is exactly zero
    const Mat c = src->value(Vec2::Zero());
    return GaugeElement(std::make_shared<ExpProductGauge>(m, std::vector<ExpFactor>{}, c,
                                                          "constant"),
                        op_norm(c - eye) <= 1e-10, spec.unitary);
  }

  if (spec.name == "bump") {
    if (!(spec.radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "bump radius must be > 0");
    SeededRng rng(spec.seed);
    ScalarField rho;
    rho.kind = ScalarField::Kind::Bump;
    rho.center = spec.center;
    rho.radius = spec.radius;
    rho.scale = spec.amplitude;
    std::vector<ExpFactor> f{ExpFactor::make(rho, seeded_generator(rng, m, spec.unitary))};
    Mat right = eye;
    if (spec.constant_boundary) {
      const Mat gen = seeded_generator(rng, m, spec.unitary);
      ScalarField one;
      one.kind = ScalarField::Kind::Trig;
      one.terms = {{1.0, 0.0, 0.0, 0.0}};
      right = ExpFactor::make(one, gen).value(Vec2::Zero());
    }
    return GaugeElement(std::make_shared<ExpProductGauge>(m, std::move(f), right, "bump"),
                        !spec.constant_boundary, spec.unitary);
  }

  if (spec.name == "random_smooth") {
    SeededRng rng(spec.seed);
    std::vector<ExpFactor> f;
    for (int k = 0; k < 2; ++k) {
      ScalarField rho;
      rho.kind = ScalarField::Kind::Trig;
      rho.scale = spec.amplitude;
      for (int p = 0; p <= 1; ++p)
        for (int q = -1; q <= 1; ++q) {
          if (p == 0 && q < 0) continue;
          rho.terms.push_back({rng.symmetric(), rng.symmetric(), static_cast<double>(p),
                               static_cast<double>(q)});
        }
      f.push_back(ExpFactor::make(rho, seeded_generator(rng, m, spec.unitary)));
    }
    return GaugeElement(std::make_shared<ExpProductGauge>(m, std::move(f), eye, "random_smooth"),
                        false, spec.unitary);
  }

  if (spec.name == "phase") {
    if (m != 1) throw Error(ErrorKind::InvalidArgument, "phase gauge is scalar (m = 1)");
    ScalarField rho;
    rho.kind = ScalarField::Kind::Product;
    rho.scale = spec.phase_scale;
    std::vector<ExpFactor> f{ExpFactor::make(rho, Mat::Constant(1, 1, kI))};
    return GaugeElement(std::make_shared<ExpProductGauge>(1, std::move(f), eye, "phase"), false,
                        true);
  }

  if (spec.name == "grid") return grid_gauge(read_gauge_grid(spec.file));

  throw Error(ErrorKind::UnknownKind, "unknown builtin gauge '" + spec.name + "'");
}

// ---------------------------------------------------------------------------
// grid representation

Vec2 GridData::node(int ix, int iy) const {
  return {box.lo.x() + ix * dx(), box.lo.y() + iy * dy()};
}

Mat& GridData::at(int ix, int iy, int field) {
  return values[static_cast<std::size_t>((iy * nx + ix) * fields + field)];
}

const Mat& GridData::at(int ix, int iy, int field) const {
  return values[static_cast<std::size_t>((iy * nx + ix) * fields + field)];
}

namespace {

// Catmull-Rom weights for offsets -1, 0, 1, 2 at local coordinate t
std::array<double, 4> cr_weights(double t) {
  const double t2 = t * t, t3 = t2 * t;
  return {0.5 * (-t3 + 2.0 * t2 - t), 0.5 * (3.0 * t3 - 5.0 * t2 + 2.0),
          0.5 * (-3.0 * t3 + 4.0 * t2 + t), 0.5 * (t3 - t2)};
}

std::array<double, 4> cr_dweights(double t) {
  const double t2 = t * t;
  return {0.5 * (-3.0 * t2 + 4.0 * t - 1.0), 0.5 * (9.0 * t2 - 10.0 * t),
          0.5 * (-9.0 * t2 + 8.0 * t + 1.0), 0.5 * (3.0 * t2 - 2.0 * t)};
}

}  // namespace

BicubicGrid::BicubicGrid(GridData data)
    : data_(std::move(data)), extrapolated_(std::make_shared<std::atomic<std::size_t>>(0)) {
  if (data_.nx < 4 || data_.ny < 4)
    throw Error(ErrorKind::InvalidArgument, "bicubic grid needs at least 4 x 4 nodes");
  if (data_.values.size() !=
      static_cast<std::size_t>(data_.nx) * static_cast<std::size_t>(data_.ny) *
          static_cast<std::size_t>(data_.fields))
    throw Error(ErrorKind::ShapeMismatch, "grid value count does not match dimensions");
}

BicubicGrid::Stencil BicubicGrid::stencil(const Vec2& x) const {
  const double fx = (x.x() - data_.box.lo.x()) / data_.dx();
  const double fy = (x.y() - data_.box.lo.y()) / data_.dy();
  const bool outside = fx < 0.0 || fy < 0.0 || fx > data_.nx - 1 || fy > data_.ny - 1;
  if (outside) {
    if (fx < -1.0 || fy < -1.0 || fx > data_.nx || fy > data_.ny)
      throw Error(ErrorKind::PointOutsideDomain,
                  "grid field evaluated more than one cell outside its grid");
    extrapolated_->fetch_add(1, std::memory_order_relaxed);
  }
  Stencil s;
  s.ix0 = std::clamp(static_cast<int>(std::floor(fx)), 1, data_.nx - 3);
  s.iy0 = std::clamp(static_cast<int>(std::floor(fy)), 1, data_.ny - 3);
  const double tx = fx - s.ix0;
  const double ty = fy - s.iy0;
  s.wx = cr_weights(tx);
  s.wy = cr_weights(ty);
  s.dwx = cr_dweights(tx);
  s.dwy = cr_dweights(ty);
  for (auto& w : s.dwx) w /= data_.dx();
  for (auto& w : s.dwy) w /= data_.dy();
  return s;
}

Mat BicubicGrid::value(const Vec2& x, int field) const {
  const Stencil s = stencil(x);
  Mat v = Mat::Zero(data_.m, data_.m);
  for (int b = 0; b < 4; ++b)
    for (int a = 0; a < 4; ++a)
      v += (s.wx[a] * s.wy[b]) * data_.at(s.ix0 - 1 + a, s.iy0 - 1 + b, field);
  return v;
}

void BicubicGrid::value_and_gradient(const Vec2& x, int field, Mat& v, Mat& dx1,
                                     Mat& dx2) const {
  const Stencil s = stencil(x);
  v = dx1 = dx2 = Mat::Zero(data_.m, data_.m);
  for (int b = 0; b < 4; ++b)
    for (int a = 0; a < 4; ++a) {
      const Mat& node = data_.at(s.ix0 - 1 + a, s.iy0 - 1 + b, field);
      v += (s.wx[a] * s.wy[b]) * node;
      dx1 += (s.dwx[a] * s.wy[b]) * node;
      dx2 += (s.wx[a] * s.dwy[b]) * node;
    }
}

namespace {

class GridPotentialSource final : public PotentialSource {
 public:
  explicit GridPotentialSource(GridData data) : grid_(std::move(data)) {}
  int channels() const override { return grid_.data().m; }
  void evaluate(const Vec2& x, PotentialSample& out) const override {
    out.A[0] = grid_.value(x, 0);
    out.A[1] = grid_.value(x, 1);
    out.V = grid_.value(x, 2);
  }
  std::string describe() const override {
    return "grid(" + std::to_string(grid_.data().nx) + "x" + std::to_string(grid_.data().ny) + ")";
  }
  std::string representation() const override { return "bicubic-grid"; }

 private:
  BicubicGrid grid_;
};

class GridGaugeSource final : public GaugeSource {
 public:
  explicit GridGaugeSource(GridData data) : grid_(std::move(data)) {}
  int channels() const override { return grid_.data().m; }
  Mat value(const Vec2& x) const override { return grid_.value(x, 0); }
  void gradient(const Vec2& x, std::array<Mat, 2>& out) const override {
    Mat v;
    grid_.value_and_gradient(x, 0, v, out[0], out[1]);
  }
  std::string describe() const override { return "grid_gauge"; }

 private:
  BicubicGrid grid_;
};

}  // namespace

GridData sample_potential(const MatrixPotential& pot, const Aabb& box, int nx, int ny) {
  GridData d;
  d.m = pot.channels();
  d.nx = nx;
  d.ny = ny;
  d.fields = 3;
  d.box = box;
  d.values.resize(static_cast<std::size_t>(nx) * ny * 3);
  PotentialSample s;
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      pot.evaluate(d.node(ix, iy), s);
      d.at(ix, iy, 0) = s.A[0];
      d.at(ix, iy, 1) = s.A[1];
      d.at(ix, iy, 2) = s.V;
    }
  return d;
}

GridData sample_gauge(const GaugeElement& g, const Aabb& box, int nx, int ny) {
  GridData d;
  d.m = g.channels();
  d.nx = nx;
  d.ny = ny;
  d.fields = 1;
  d.box = box;
  d.values.resize(static_cast<std::size_t>(nx) * ny);
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) d.at(ix, iy, 0) = g.value(d.node(ix, iy));
  return d;
}

MatrixPotential grid_potential(GridData data) {
  if (data.fields != 3) throw Error(ErrorKind::ShapeMismatch, "potential grids carry 3 fields");
  bool herm = true;
  for (const auto& v : data.values) herm = herm && hermitian_defect(v) <= 1e-12;
  return MatrixPotential(std::make_shared<GridPotentialSource>(std::move(data)), herm);
}

GaugeElement grid_gauge(GridData data, bool is_g0) {
  if (data.fields != 1) throw Error(ErrorKind::ShapeMismatch, "gauge grids carry 1 field");
  bool unitary = true;
  for (const auto& v : data.values)
    unitary = unitary && (v.adjoint() * v - Mat::Identity(v.rows(), v.cols())).norm() <= 1e-12;
  return GaugeElement(std::make_shared<GridGaugeSource>(std::move(data)), is_g0, unitary);
}

}  // namespace gaugelab
