#include "ptsusy/closed_form.hpp"

#include <algorithm>
#include <cmath>

namespace ptsusy {

PointSet PointSet::united(const PointSet& other) const {
  std::vector<Lattice> all = lattices_;
  all.insert(all.end(), other.lattices_.begin(), other.lattices_.end());
  return PointSet(std::move(all));
}

PointSet PointSet::shifted(double dx) const {
  std::vector<Lattice> out = lattices_;
  for (auto& l : out) l.offset -= dx;
  return PointSet(std::move(out));
}

PointSet PointSet::reflected() const {
  std::vector<Lattice> out = lattices_;
  for (auto& l : out) l.offset = -l.offset;
  return PointSet(std::move(out));
}

std::vector<double> PointSet::in(double a, double b) const {
  const double slack = 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
  std::vector<double> pts;
  for (const auto& l : lattices_) {
    if (l.period == 0.0) {
      if (l.offset >= a - slack && l.offset <= b + slack) pts.push_back(l.offset);
      continue;
    }
    const double p = std::abs(l.period);
    const auto first = static_cast<long long>(std::ceil((a - slack - l.offset) / p));
    const auto last = static_cast<long long>(std::floor((b + slack - l.offset) / p));
    for (long long m = first; m <= last; ++m) pts.push_back(l.offset + double(m) * p);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [slack](double u, double v) { return std::abs(u - v) <= slack; }),
            pts.end());
  return pts;
}

std::vector<double> PointSet::inside(double a, double b, double margin) const {
  std::vector<double> pts = in(a, b);
  std::erase_if(pts, [&](double x) { return x <= a + margin || x >= b - margin; });
  return pts;
}

bool PointSet::contains(double x, double tol) const { return !in(x - tol, x + tol).empty(); }

ClosedFormFunction::ClosedFormFunction() : fn_([](double) { return Jet(0.0); }) {}

ClosedFormFunction::ClosedFormFunction(JetFn fn, PointSet poles, PointSet zeros)
    : fn_(std::move(fn)), poles_(std::move(poles)), zeros_(std::move(zeros)) {}

ClosedFormFunction ClosedFormFunction::constant(cplx c) {
  ClosedFormFunction f([c](double) { return Jet(c); });
  return f.with_antiderivative([c](double x) { return c * Jet::variable(x); });
}

ClosedFormFunction ClosedFormFunction::derivative() const {
  auto fn = fn_;
  ClosedFormFunction d([fn](double x) { return fn(x).differentiated(); }, poles_);
  d.antiderivative_ = fn_;
  return d;
}

ClosedFormFunction ClosedFormFunction::shifted(double dx) const {
  auto fn = fn_;
  ClosedFormFunction s([fn, dx](double x) { return fn(x + dx); }, poles_.shifted(dx),
                       zeros_.shifted(dx));
  if (antiderivative_) {
    auto F = *antiderivative_;
    s.antiderivative_ = [F, dx](double x) { return F(x + dx); };
  }
  return s;
}

namespace {

Jet conj_jet(const Jet& j) {
  Jet r = j;
  for (int k = 0; k <= Jet::kMaxOrder; ++k) r[k] = std::conj(j[k]);
  return r;
}

Jet reflect_jet(const Jet& j) {
  Jet r = j;
  for (int k = 1; k <= Jet::kMaxOrder; k += 2) r[k] = -j[k];
  return r;
}

}  // namespace

ClosedFormFunction ClosedFormFunction::conjugated() const {
  auto fn = fn_;
  ClosedFormFunction c([fn](double x) { return conj_jet(fn(x)); }, poles_, zeros_);
  if (antiderivative_) {
    auto F = *antiderivative_;
    c.antiderivative_ = [F](double x) { return conj_jet(F(x)); };
  }
  return c;
}

ClosedFormFunction ClosedFormFunction::reflected() const {
  auto fn = fn_;
  ClosedFormFunction r([fn](double x) { return reflect_jet(fn(-x)); }, poles_.reflected(),
                       zeros_.reflected());
  if (antiderivative_) {
    auto F = *antiderivative_;
    r.antiderivative_ = [F](double x) { return -reflect_jet(F(-x)); };
  }
  return r;
}

ClosedFormFunction ClosedFormFunction::with_antiderivative(JetFn antiderivative) const {
  ClosedFormFunction f = *this;
  f.antiderivative_ = std::move(antiderivative);
  return f;
}

ClosedFormFunction ClosedFormFunction::operator-() const { return cplx(-1.0) * *this; }

ClosedFormFunction operator+(const ClosedFormFunction& a, const ClosedFormFunction& b) {
  auto fa = a.fn_, fb = b.fn_;
  ClosedFormFunction s([fa, fb](double x) { return fa(x) + fb(x); }, a.poles_.united(b.poles_));
  if (a.antiderivative_ && b.antiderivative_) {
    auto Fa = *a.antiderivative_, Fb = *b.antiderivative_;
    s.antiderivative_ = [Fa, Fb](double x) { return Fa(x) + Fb(x); };
  }
  return s;
}

ClosedFormFunction operator-(const ClosedFormFunction& a, const ClosedFormFunction& b) {
  return a + (-b);
}

ClosedFormFunction operator*(const ClosedFormFunction& a, const ClosedFormFunction& b) {
  auto fa = a.fn_, fb = b.fn_;
  return ClosedFormFunction([fa, fb](double x) { return fa(x) * fb(x); }, a.poles_.united(b.poles_),
                            a.zeros_.united(b.zeros_));
}

ClosedFormFunction operator/(const ClosedFormFunction& a, const ClosedFormFunction& b) {
  auto fa = a.fn_, fb = b.fn_;
  return ClosedFormFunction([fa, fb](double x) { return fa(x) / fb(x); }, a.poles_.united(b.zeros_),
                            a.zeros_.united(b.poles_));
}

ClosedFormFunction operator*(cplx s, const ClosedFormFunction& a) {
  auto fa = a.fn_;
  ClosedFormFunction r([fa, s](double x) { return fa(x) * s; }, a.poles_,
                       s == cplx(0.0) ? PointSet() : a.zeros_);
  if (a.antiderivative_) {
    auto F = *a.antiderivative_;
    r.antiderivative_ = [F, s](double x) { return F(x) * s; };
  }
  return r;
}

ClosedFormFunction operator+(const ClosedFormFunction& a, cplx s) {
  return a + ClosedFormFunction::constant(s);
}

}  // namespace ptsusy
