#include "nctgabor/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "nctgabor/error.hpp"

namespace nct {

LatticeSeq::LatticeSeq(const TorusParams& params, LatticeKind kind, double radius)
    : params_(params), kind_(kind), radius_(radius), basis_(lattice_basis(params, kind)) {}

LatticeSeq::LatticeSeq(const TorusParams& params, LatticeKind kind, double radius, const IndexBox& box)
    : LatticeSeq(params, kind, radius) {
  grow_to(box);
}

LatticeSeq LatticeSeq::delta(const TorusParams& params, LatticeKind kind, double radius, long n1, long n2) {
  LatticeSeq a(params, kind, radius);
  a.set(n1, n2, 1.0);
  return a;
}

cplx LatticeSeq::operator()(long n1, long n2) const {
  return box_.contains(n1, n2) ? data_[offset(n1, n2)] : cplx(0.0);
}

void LatticeSeq::grow_to(const IndexBox& want) {
  if (want.empty()) return;
  IndexBox nb = want;
  if (!box_.empty()) {
    nb.n1_lo = std::min(nb.n1_lo, box_.n1_lo);
    nb.n1_hi = std::max(nb.n1_hi, box_.n1_hi);
    nb.n2_lo = std::min(nb.n2_lo, box_.n2_lo);
    nb.n2_hi = std::max(nb.n2_hi, box_.n2_hi);
    if (nb.n1_lo == box_.n1_lo && nb.n1_hi == box_.n1_hi && nb.n2_lo == box_.n2_lo && nb.n2_hi == box_.n2_hi)
      return;
  }
  std::vector<cplx> fresh(static_cast<size_t>(nb.width1() * nb.width2()), cplx(0.0));
  for (long n1 = box_.n1_lo; n1 <= box_.n1_hi; ++n1)
    for (long n2 = box_.n2_lo; n2 <= box_.n2_hi; ++n2)
      fresh[static_cast<size_t>((n1 - nb.n1_lo) * nb.width2() + (n2 - nb.n2_lo))] = data_[offset(n1, n2)];
  box_ = nb;
  data_ = std::move(fresh);
}

void LatticeSeq::set(long n1, long n2, cplx v) {
  if (!box_.contains(n1, n2)) {
    if (v == cplx(0.0)) return;
    grow_to(IndexBox{n1, n1, n2, n2});
  }
  data_[offset(n1, n2)] = v;
}

void LatticeSeq::add(long n1, long n2, cplx v) {
  if (!box_.contains(n1, n2)) grow_to(IndexBox{n1, n1, n2, n2});
  data_[offset(n1, n2)] += v;
}

size_t LatticeSeq::nonzeros() const {
  return static_cast<size_t>(std::count_if(data_.begin(), data_.end(), [](cplx v) { return v != cplx(0.0); }));
}

double LatticeSeq::l1() const {
  double s = 0.0;
  for (const auto& v : data_) s += std::abs(v);
  return s;
}

double LatticeSeq::weighted_l1(double s) const {
  double total = 0.0;
  for_each([&](long n1, long n2, cplx v) {
    PhasePoint nu = point(n1, n2);
    total += std::abs(v) * std::pow(1.0 + std::abs(nu.lambda) + std::abs(nu.gamma), s);
  });
  return total;
}

double LatticeSeq::max_abs() const {
  double m = 0.0;
  for (const auto& v : data_) m = std::max(m, std::abs(v));
  return m;
}

LatticeSeq LatticeSeq::restricted(double radius) const {
  LatticeSeq out(params_, kind_, radius);
  IndexBox want = index_box(basis_, radius);
  for_each([&](long n1, long n2, cplx v) {
    if (want.contains(n1, n2)) out.set(n1, n2, v);
  });
  return out;
}

void LatticeSeq::prune(double threshold) {
  IndexBox nb{0, -1, 0, -1};
  bool any = false;
  for (long n1 = box_.n1_lo; n1 <= box_.n1_hi; ++n1)
    for (long n2 = box_.n2_lo; n2 <= box_.n2_hi; ++n2) {
      cplx& v = data_[offset(n1, n2)];
      if (std::abs(v) < threshold) {
        v = 0.0;
        continue;
      }
      if (!any) {
        nb = IndexBox{n1, n1, n2, n2};
        any = true;
      } else {
        nb.n1_lo = std::min(nb.n1_lo, n1);
        nb.n1_hi = std::max(nb.n1_hi, n1);
        nb.n2_lo = std::min(nb.n2_lo, n2);
        nb.n2_hi = std::max(nb.n2_hi, n2);
      }
    }
  LatticeSeq shrunk(params_, kind_, radius_);
  if (any) {
    shrunk.grow_to(nb);
    for_each([&](long n1, long n2, cplx v) { shrunk.data_[shrunk.offset(n1, n2)] = v; });
  }
  box_ = shrunk.box_;
  data_ = std::move(shrunk.data_);
}

bool LatticeSeq::same_lattice(const LatticeSeq& o) const {
  return kind_ == o.kind_ && params_.alpha == o.params_.alpha && params_.beta == o.params_.beta &&
         params_.r == o.params_.r && params_.s == o.params_.s && params_.q == o.params_.q;
}

void require_same_lattice(const LatticeSeq& a, const LatticeSeq& b) {
  if (!a.same_lattice(b)) fail(ErrorCode::LatticeMismatch, "sequences live on different lattices");
}

LatticeSeq& LatticeSeq::operator+=(const LatticeSeq& o) {
  require_same_lattice(*this, o);
  grow_to(o.box_);
  o.for_each([&](long n1, long n2, cplx v) { data_[offset(n1, n2)] += v; });
  radius_ = std::max(radius_, o.radius_);
  return *this;
}

LatticeSeq& LatticeSeq::operator-=(const LatticeSeq& o) {
  require_same_lattice(*this, o);
  grow_to(o.box_);
  o.for_each([&](long n1, long n2, cplx v) { data_[offset(n1, n2)] -= v; });
  radius_ = std::max(radius_, o.radius_);
  return *this;
}

LatticeSeq& LatticeSeq::operator*=(cplx s) {
  for (auto& v : data_) v *= s;
  return *this;
}

LatticeSeq operator+(LatticeSeq a, const LatticeSeq& b) { return a += b; }
LatticeSeq operator-(LatticeSeq a, const LatticeSeq& b) { return a -= b; }
LatticeSeq operator*(cplx s, LatticeSeq a) { return a *= s; }

cplx lattice_cocycle(const LatticeSeq& like, long a1, long a2, long b1, long b2) {
  cplx phi = cocycle(like.point(a1, a2), like.point(b1, b2), like.params().q);
  return like.kind() == LatticeKind::Adjoint ? std::conj(phi) : phi;
}

namespace {

// The cocycle between lattice points depends only on k = a1*b2:
// lambda_a gamma_b = t f k and l_a c_b = ts fs k mod q.
class CocycleTable {
 public:
  CocycleTable(const LatticeSeq& like, long k_lo, long k_hi) : k_lo_(k_lo) {
    const LatticeBasis& b = like.basis();
    const int q = b.q;
    const double tf = b.time_step * b.freq_step;
    const long long slope = static_cast<long long>(b.time_slope) * b.freq_slope;
    bool adjoint = like.kind() == LatticeKind::Adjoint;
    table_.resize(static_cast<size_t>(k_hi - k_lo + 1));
    for (long k = k_lo; k <= k_hi; ++k) {
      double lg = tf * static_cast<double>(k);
      double turns = (lg - std::round(lg)) + static_cast<double>(wrap(slope * k, q)) / q;
      cplx v = unit_phase(-turns);
      table_[static_cast<size_t>(k - k_lo)] = adjoint ? std::conj(v) : v;
    }
  }
  cplx operator()(long k) const { return table_[static_cast<size_t>(k - k_lo_)]; }

 private:
  long k_lo_;
  std::vector<cplx> table_;
};

std::pair<long, long> product_range(long a_lo, long a_hi, long b_lo, long b_hi) {
  long c[4] = {a_lo * b_lo, a_lo * b_hi, a_hi * b_lo, a_hi * b_hi};
  return {*std::min_element(c, c + 4), *std::max_element(c, c + 4)};
}

}  // namespace

LatticeSeq twisted_conv(const LatticeSeq& a, const LatticeSeq& b) {
  require_same_lattice(a, b);
  LatticeSeq out(a.params(), a.kind(), std::max(a.radius(), b.radius()));
  if (a.box().empty() || b.box().empty()) return out;
  const IndexBox& ba = a.box();
  const IndexBox& bb = b.box();
  out = LatticeSeq(a.params(), a.kind(), out.radius(),
                   IndexBox{ba.n1_lo + bb.n1_lo, ba.n1_hi + bb.n1_hi, ba.n2_lo + bb.n2_lo, ba.n2_hi + bb.n2_hi});
  auto [k_lo, k_hi] = product_range(ba.n1_lo, ba.n1_hi, bb.n2_lo, bb.n2_hi);
  CocycleTable phi(a, k_lo, k_hi);

  // collect b once as a flat list
  struct Entry { long n1, n2; cplx v; };
  std::vector<Entry> eb;
  b.for_each([&](long n1, long n2, cplx v) { eb.push_back({n1, n2, v}); });
  a.for_each([&](long i1, long i2, cplx va) {
    for (const Entry& e : eb) out.add(i1 + e.n1, i2 + e.n2, va * e.v * phi(i1 * e.n2));
  });
  out.prune();
  return out;
}

LatticeSeq twisted_star(const LatticeSeq& a) {
  LatticeSeq out(a.params(), a.kind(), a.radius());
  const int q = a.params().q;
  bool adjoint = a.kind() == LatticeKind::Adjoint;
  a.for_each([&](long n1, long n2, cplx v) {
    // value at -nu: phi(-nu,-nu) conj(a(nu)) with phi(-nu,-nu) = phi(nu,nu)
    PhasePoint nu = a.point(n1, n2);
    cplx phi = cocycle(nu, nu, q);
    out.set(-n1, -n2, (adjoint ? std::conj(phi) : phi) * std::conj(v));
  });
  return out;
}

cplx trace_l(const LatticeSeq& a) {
  if (a.kind() != LatticeKind::TimeFrequency) fail(ErrorCode::LatticeMismatch, "trace_l expects a time-frequency sequence");
  return a(0, 0);
}

cplx trace_r(const LatticeSeq& b) {
  if (b.kind() != LatticeKind::Adjoint) fail(ErrorCode::LatticeMismatch, "trace_r expects an adjoint sequence");
  return b.params().density() * b(0, 0);
}

cplx trace_of_product(const LatticeSeq& a, const LatticeSeq& b) {
  require_same_lattice(a, b);
  cplx sum = 0.0;
  a.for_each([&](long n1, long n2, cplx v) {
    cplx w = b(-n1, -n2);
    if (w != cplx(0.0)) sum += v * w * lattice_cocycle(a, n1, n2, -n1, -n2);
  });
  return a.kind() == LatticeKind::Adjoint ? a.params().density() * sum : sum;
}

namespace {

void require_channels(const TorusParams& p, const GridSignal& f) {
  if (f.channels() != p.q) fail(ErrorCode::SpecMismatch, "signal channel count differs from q");
}

// exp(2 pi i x_j gamma) rows and exp(2 pi i k c / q) channel phases for a range of n2.
struct ModulationTable {
  ModulationTable(const GridSpec& spec, const LatticeBasis& basis, long n2_lo, long n2_hi)
      : lo(n2_lo), n(spec.samples), q(spec.channels) {
    long count = n2_hi - n2_lo + 1;
    rows.resize(static_cast<size_t>(count * n));
    chans.resize(static_cast<size_t>(count * q));
    for (long n2 = n2_lo; n2 <= n2_hi; ++n2) {
      PhasePoint nu = basis.point(0, n2);
      for (int j = 0; j < n; ++j) rows[static_cast<size_t>((n2 - lo) * n + j)] = unit_phase(spec.x(j) * nu.gamma);
      for (int k = 0; k < q; ++k)
        chans[static_cast<size_t>((n2 - lo) * q + k)] =
            unit_phase(static_cast<double>(wrap(static_cast<long long>(k) * nu.c, q)) / q);
    }
  }
  const cplx* row(long n2) const { return rows.data() + (n2 - lo) * n; }
  cplx chan(long n2, int k) const { return chans[static_cast<size_t>((n2 - lo) * q + k)]; }

  long lo;
  int n, q;
  std::vector<cplx> rows, chans;
};

// out[n2] = dx * sum_{k,j} w(k,j) exp(-2 pi i (x_j gamma + k c/q)) over the n2 range.
void project_modulations(const GridSignal& w, const ModulationTable& mt, long n2_lo, long n2_hi, double scale,
                         LatticeSeq& out, long n1) {
  const int n = w.samples();
  for (long n2 = n2_lo; n2 <= n2_hi; ++n2) {
    const cplx* row = mt.row(n2);
    cplx total = 0.0;
    for (int k = 0; k < w.channels(); ++k) {
      const cplx* wk = w.channel(k);
      cplx s = 0.0;
      for (int j = 0; j < n; ++j) s += wk[j] * std::conj(row[j]);
      total += s * std::conj(mt.chan(n2, k));
    }
    out.set(n1, n2, scale * w.spec().step() * total);
  }
}

}  // namespace

GridSignal act_left(const LatticeSeq& a, const GridSignal& f) {
  if (a.kind() != LatticeKind::TimeFrequency) fail(ErrorCode::LatticeMismatch, "act_left expects a time-frequency sequence");
  require_channels(a.params(), f);
  GridSignal out(f.spec());
  if (a.box().empty()) return out;
  const IndexBox& box = a.box();
  ModulationTable mt(f.spec(), a.basis(), box.n2_lo, box.n2_hi);
  const int n = f.samples(), q = f.channels();
  GridSignal mult(f.spec());
  for (long n1 = box.n1_lo; n1 <= box.n1_hi; ++n1) {
    bool any = false;
    std::fill(mult.values().begin(), mult.values().end(), cplx(0.0));
    for (long n2 = box.n2_lo; n2 <= box.n2_hi; ++n2) {
      cplx v = a(n1, n2);
      if (v == cplx(0.0)) continue;
      any = true;
      const cplx* row = mt.row(n2);
      for (int k = 0; k < q; ++k) {
        cplx vk = v * mt.chan(n2, k);
        cplx* mk = mult.channel(k);
        for (int j = 0; j < n; ++j) mk[j] += vk * row[j];
      }
    }
    if (!any) continue;
    PhasePoint nu = a.point(n1, 0);
    GridSignal tf = translate(f, nu.lambda, nu.l);
    auto& ov = out.values();
    for (size_t i = 0; i < ov.size(); ++i) ov[i] += mult.values()[i] * tf.values()[i];
  }
  return out;
}

GridSignal act_right(const GridSignal& f, const LatticeSeq& b) {
  if (b.kind() != LatticeKind::Adjoint) fail(ErrorCode::LatticeMismatch, "act_right expects an adjoint sequence");
  require_channels(b.params(), f);
  GridSignal out(f.spec());
  if (b.box().empty()) return out;
  const IndexBox& box = b.box();
  ModulationTable mt(f.spec(), b.basis(), box.n2_lo, box.n2_hi);
  const int n = f.samples(), q = f.channels();
  GridSignal inner_sum(f.spec());
  for (long n1 = box.n1_lo; n1 <= box.n1_hi; ++n1) {
    bool any = false;
    std::fill(inner_sum.values().begin(), inner_sum.values().end(), cplx(0.0));
    for (long n2 = box.n2_lo; n2 <= box.n2_hi; ++n2) {
      cplx v = b(n1, n2);
      if (v == cplx(0.0)) continue;
      any = true;
      const cplx* row = mt.row(n2);
      for (int k = 0; k < q; ++k) {
        cplx vk = v * mt.chan(n2, k);
        cplx* sk = inner_sum.channel(k);
        const cplx* fk = f.channel(k);
        for (int j = 0; j < n; ++j) sk[j] += vk * row[j] * fk[j];
      }
    }
    if (!any) continue;
    PhasePoint nu = b.point(n1, 0);
    out += translate(inner_sum, nu.lambda, nu.l);
  }
  return out;
}

LatticeSeq inner_left(const GridSignal& f, const GridSignal& g, const TorusParams& p, double radius) {
  require_same_spec(f.spec(), g.spec());
  require_channels(p, f);
  LatticeBasis basis = lattice_basis(p, LatticeKind::TimeFrequency);
  IndexBox box = index_box(basis, radius);
  LatticeSeq out(p, LatticeKind::TimeFrequency, radius, box);
  ModulationTable mt(f.spec(), basis, box.n2_lo, box.n2_hi);
  GridSignal w(f.spec());
  for (long n1 = box.n1_lo; n1 <= box.n1_hi; ++n1) {
    PhasePoint nu = basis.point(n1, 0);
    GridSignal tg = translate(g, nu.lambda, nu.l);
    for (size_t i = 0; i < w.values().size(); ++i) w.values()[i] = f.values()[i] * std::conj(tg.values()[i]);
    project_modulations(w, mt, box.n2_lo, box.n2_hi, 1.0, out, n1);
  }
  out.prune();
  return out;
}

LatticeSeq inner_right(const GridSignal& f, const GridSignal& g, const TorusParams& p, double radius) {
  require_same_spec(f.spec(), g.spec());
  require_channels(p, f);
  LatticeBasis basis = lattice_basis(p, LatticeKind::Adjoint);
  IndexBox box = index_box(basis, radius);
  LatticeSeq out(p, LatticeKind::Adjoint, radius, box);
  ModulationTable mt(f.spec(), basis, box.n2_lo, box.n2_hi);
  const double kappa = 1.0 / p.density();
  GridSignal w(f.spec());
  for (long n1 = box.n1_lo; n1 <= box.n1_hi; ++n1) {
    PhasePoint nu = basis.point(n1, 0);
    // <g, T E f> = <T^{-1} g, E f>
    GridSignal tg = translate(g, -nu.lambda, wrap(-nu.l, p.q));
    for (size_t i = 0; i < w.values().size(); ++i) w.values()[i] = tg.values()[i] * std::conj(f.values()[i]);
    project_modulations(w, mt, box.n2_lo, box.n2_hi, kappa, out, n1);
  }
  out.prune();
  return out;
}

void write_seq(std::ostream& os, const LatticeSeq& a) {
  const TorusParams& p = a.params();
  os << std::setprecision(17);
  os << "# alpha beta r s q kind radius\n";
  os << p.alpha << ' ' << p.beta << ' ' << p.r << ' ' << p.s << ' ' << p.q << ' '
     << (a.kind() == LatticeKind::TimeFrequency ? "tf" : "adjoint") << ' ' << a.radius() << '\n';
  os << "# n1 n2 re im\n";
  a.for_each([&](long n1, long n2, cplx v) { os << n1 << ' ' << n2 << ' ' << v.real() << ' ' << v.imag() << '\n'; });
}

LatticeSeq read_seq(std::istream& is) {
  std::string line;
  auto next = [&]() {
    while (std::getline(is, line)) {
      auto pos = line.find_first_not_of(" \t\r");
      if (pos != std::string::npos && line[pos] != '#') return true;
    }
    return false;
  };
  if (!next()) fail(ErrorCode::Io, "missing sequence header");
  TorusParams p;
  std::string kind;
  double radius;
  {
    std::istringstream hs(line);
    if (!(hs >> p.alpha >> p.beta >> p.r >> p.s >> p.q >> kind >> radius)) fail(ErrorCode::Io, "bad sequence header");
  }
  if (kind != "tf" && kind != "adjoint") fail(ErrorCode::Io, "unknown lattice kind " + kind);
  LatticeSeq a(p, kind == "tf" ? LatticeKind::TimeFrequency : LatticeKind::Adjoint, radius);
  while (next()) {
    std::istringstream rs(line);
    long n1, n2;
    double re, im;
    if (!(rs >> n1 >> n2 >> re >> im)) fail(ErrorCode::Io, "bad sequence row: " + line);
    a.set(n1, n2, cplx(re, im));
  }
  return a;
}

}  // namespace nct
