#include "arboreal/measure.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace arboreal {

namespace {

BigInt ipow(long base, long e) {
  BigInt r = 1;
  for (long i = 0; i < e; ++i) r *= base;
  return r;
}

/// Depth-first streaming over all depth-n cell labels in lex order.
template <typename Fn>
void walk_labels(const LocalGroup& F, const BoundaryPoint& xi, int depth, const Vertex& w,
                 Fn&& fn) {
  int i = w.length();
  if (i == depth) {
    fn(w);
    return;
  }
  std::set<Color> letters;
  if (i == 0) {
    for (Color c : F.orbit(xi.letter(0))) letters.insert(c);
  } else {
    for (const Perm& sigma : F.coset(xi.letter(i - 1), w.letter(i - 1)))
      letters.insert(sigma(xi.letter(i)));
  }
  for (Color c : letters) walk_labels(F, xi, depth, w.child(c), fn);
}

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

unsigned worker_count(unsigned jobs) {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("ARBOREAL_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) hw = static_cast<unsigned>(v);
  }
  return std::min(hw, std::max(1u, jobs));
}

/// Certified walk with the smallest budget the certificate allows; falls back
/// to the default budget when the tight one cannot certify.
RayWalkResult walk_tight(const Portrait& g, const BoundaryPoint& xi) {
  int per = std::max<int>(1, static_cast<int>(xi.period().size()));
  int cap = g.token_depth() + static_cast<int>(xi.prefix().size()) + 2 * per + 3;
  try {
    return ray_walk(g, xi, cap);
  } catch (const InsufficientDepth&) {
    return ray_walk(g, xi);
  }
}

/// Exact end image of xi under the depth-|label| rotation onto `label`: the
/// label path followed by the chain-canonical continuation, whose letters obey
/// eta[j] = transversal(xi[j-1], eta[j-1])(xi[j]) and therefore cycle on the
/// finite state (previous letter, position phase).
BoundaryPoint canonical_end(const LocalGroup& F, const BoundaryPoint& xi, const Vertex& label) {
  int D = label.length();
  if (D == 0) return xi;
  int pre = static_cast<int>(xi.prefix().size());
  int p = static_cast<int>(xi.period().size());
  int limit = D + pre + (F.degree() + 2) * p + 8;
  std::string letters;
  letters.reserve(limit + 2);
  for (int j = 0; j < D; ++j) letters.push_back(static_cast<char>('0' + label.letter(j)));
  struct State {
    Color prev;
    int phase;
    int pos;
  };
  std::vector<State> seen;
  int j = D;
  while (true) {
    Color prev = letters[j - 1] - '0';
    if (j >= std::max(D, pre + 1)) {
      int phase = (j - pre) % p;
      for (const State& st : seen)
        if (st.prev == prev && st.phase == phase)
          return BoundaryPoint(letters.substr(0, st.pos), letters.substr(st.pos, j - st.pos),
                               F.degree());
      seen.push_back(State{prev, phase, j});
    }
    std::optional<Perm> sigma = F.transversal(xi.letter(j - 1), prev);
    if (!sigma) throw std::logic_error("canonical continuation left the color orbit");
    letters.push_back(static_cast<char>('0' + (*sigma)(xi.letter(j))));
    ++j;
    if (j > limit) throw std::logic_error("canonical continuation failed to cycle");
  }
}

struct PrependResult {
  BoundaryPoint end;
  int cancelled = 0;
};

/// Left-multiplies the end by the reduced word w, cancelling boundary pairs.
PrependResult prepend_word(const Vertex& w, const BoundaryPoint& e, int d) {
  int i = w.length() - 1;
  int c = 0;
  while (i >= 0 && w.letter(i) == e.letter(c)) {
    --i;
    ++c;
  }
  std::string prefix;
  for (int j = 0; j <= i; ++j) prefix.push_back(static_cast<char>('0' + w.letter(j)));
  int pre = static_cast<int>(e.prefix().size());
  int p = static_cast<int>(e.period().size());
  std::string period;
  if (c < pre) {
    prefix += e.prefix().substr(c);
    period = e.period();
  } else {
    int shift = (c - pre) % p;
    period = e.period().substr(shift) + e.period().substr(0, shift);
  }
  return PrependResult{BoundaryPoint(prefix, period, d), c};
}

bool entry_free(const Portrait& p) { return p.is_leaf() && p.leaf_entries().empty(); }

Vertex reverse_word(const Vertex& w, int d) {
  std::string s = w.word();
  std::reverse(s.begin(), s.end());
  return Vertex::parse(s, d);
}

}  // namespace

RhoFunction make_rho(const ParabolicSpec& H) {
  RhoFunction rho;
  rho.H = H;
  if (H.kind == ParabolicKind::FullFixator) {
    MinimalHyperbolic mh = minimal_hyperbolic(H);
    rho.delta = modular_value(H, mh.gamma);
    rho.gamma_length = mh.length;
    rho.gamma = mh.gamma;
  }
  return rho;
}

Rational rho_eval(const RhoFunction& rho, const Portrait& g, int depth) {
  const ParabolicSpec& H = rho.H;
  if (!g.valid()) throw std::invalid_argument("rho_eval: invalid element");
  if (g.group_ptr().get() != H.F.get())
    throw std::invalid_argument("rho_eval: element and subgroup use different local groups");

  RayWalkResult gw = ray_walk(g, H.xi, depth);
  if (!gw.image_end) throw InsufficientDepth("rho_eval: image end not certified");
  BoundaryPoint eta = *gw.image_end;

  int per = std::max<int>(1, static_cast<int>(eta.period().size()));
  int start = std::max({g.support_bound(), static_cast<int>(eta.prefix().size()) + per, 1});
  for (int j = 0; j < 40; ++j) {
    int D = start + j * per;
    Portrait k;
    try {
      k = Portrait::path_rotation(H.F, H.xi.ray_vertex(D), eta.ray_vertex(D));
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("rho_eval: image end leaves the orbit of the end (not in K*H)");
    }
    RayWalkResult kw = ray_walk(k, H.xi, depth);
    if (!kw.image_end || !(*kw.image_end == eta)) continue;
    Portrait h = compose(inverse(k), g);
    std::optional<RayWalkResult> hw = membership_walk(H, h, depth);
    if (!hw) throw std::invalid_argument("rho_eval: end-fixing factor escapes the subgroup (not in K*H)");
    if (hw->busemann_shift == 0) return Rational(1);
    if (rho.gamma_length <= 0 || hw->busemann_shift % rho.gamma_length != 0)
      throw std::logic_error("rho_eval: shift is not a multiple of the minimal length");
    return rational_pow(rho.delta, hw->busemann_shift / rho.gamma_length);
  }
  throw InsufficientDepth("rho_eval: no stored depth locks onto the image end");
}

Rational radon_nikodym(const RhoFunction& rho, const Portrait& g, const CosetRep& cell,
                       int depth) {
  const ParabolicSpec& H = rho.H;
  Rational value = rho_eval(rho, compose(g, cell.rep), depth);

  // Constancy certificate: the value must be stable on every child cell.
  int n = cell.label.length();
  Vertex deeper = H.xi.ray_vertex(n + 1);
  std::set<Color> letters;
  if (n == 0)
    for (Color c : H.F->orbit(H.xi.letter(0))) letters.insert(c);
  else
    for (const Perm& sigma : H.F->coset(H.xi.letter(n - 1), cell.label.last()))
      letters.insert(sigma(H.xi.letter(n)));
  for (Color c : letters) {
    Portrait child_rep = Portrait::path_rotation(H.F, deeper, cell.label.child(c));
    Rational check = rho_eval(rho, compose(g, child_rep), depth);
    if (check != value)
      throw RefineNeeded("radon_nikodym: value varies across the cell; refine the partition");
  }
  return value;
}

CylinderMeasure cylinder_measure(const ParabolicSpec& H, int depth) {
  if (depth < 0) throw std::invalid_argument("cylinder_measure: negative depth");
  CylinderMeasure mu;
  mu.depth = depth;
  mu.cells = fixator_index(*H.F, H.xi.ray_vertex(depth));
  return mu;
}

Rational cell_mass(const CylinderMeasure& mu) { return Rational(BigInt(1), mu.cells); }

QuadExt bound_integral(const RhoFunction& rho, const Portrait& t, const Portrait& f1,
                       const Portrait& f2, int depth) {
  const ParabolicSpec& H = rho.H;
  if (depth < 0) throw std::invalid_argument("bound_integral: negative depth");
  for (const Portrait* p : {&t, &f1, &f2}) {
    if (!p->valid()) throw std::invalid_argument("bound_integral: invalid element");
    if (p->group_ptr().get() != H.F.get())
      throw std::invalid_argument("bound_integral: mixed local groups");
  }
  const LocalGroup& F = *H.F;
  int d = F.degree();
  Rational mass = cell_mass(cylinder_measure(H, depth));
  Portrait lead = compose(t, f1);
  Portrait target_map = compose(inverse(lead), f2);
  Vertex ray_floor = H.xi.ray_vertex(depth);

  std::vector<Vertex> labels;
  walk_labels(F, H.xi, depth, Vertex::base(), [&](const Vertex& w) { labels.push_back(w); });

  // Entry-free leaves act on ends by reduced-word prepends, and the rotation
  // reps carry the standard ray onto their cells depth-preservingly, so every
  // cell reduces to word arithmetic: no portrait walks, no certification caps.
  bool flat = H.kind != ParabolicKind::RayFixator && entry_free(t) && entry_free(f1) &&
              entry_free(f2);
  Vertex wt, u, v, rev_wt, rev_u, rev_v;
  std::vector<char> orbit0(static_cast<std::size_t>(d) + 1, 0);
  if (flat) {
    wt = t.root_image();
    u = f1.root_image();
    v = f2.root_image();
    rev_wt = reverse_word(wt, d);
    rev_u = reverse_word(u, d);
    rev_v = reverse_word(v, d);
    for (Color c : F.orbit(H.xi.letter(0))) orbit0[c] = 1;
  }

  auto fast_term = [&](const Vertex& label) -> QuadExt {
    BoundaryPoint eta = canonical_end(F, H.xi, label);
    PrependResult a = prepend_word(v, eta, d);
    PrependResult b = prepend_word(rev_wt, a.end, d);
    PrependResult c = prepend_word(rev_u, b.end, d);
    const BoundaryPoint& tau = c.end;
    if (depth > 0) {
      if (!orbit0[tau.letter(0)]) return QuadExt();
      for (int i = 1; i < depth; ++i)
        if (!F.transversal2(H.xi.letter(i), tau.letter(i), H.xi.letter(i - 1), tau.letter(i - 1)))
          return QuadExt();
    }
    if (!(canonical_end(F, H.xi, tau.ray_vertex(depth)) == tau)) return QuadExt();
    PrependResult s1 = prepend_word(u, tau, d);
    PrependResult s2 = prepend_word(wt, s1.end, d);
    PrependResult s3 = prepend_word(rev_v, s2.end, d);
    if (!(s3.end == eta)) throw std::logic_error("bound_integral: end chain failed to close");
    long shift = static_cast<long>(u.length()) - 2 * s1.cancelled + wt.length() -
                 2 * s2.cancelled + v.length() - 2 * s3.cancelled;
    if (H.kind != ParabolicKind::FullFixator)
      return shift == 0 ? QuadExt::of_rational(mass) : QuadExt();
    if (rho.gamma_length <= 0 || shift % rho.gamma_length != 0)
      throw std::logic_error("bound_integral: shift is not a multiple of the minimal length");
    return QuadExt::half_power(rho.delta, -shift / rho.gamma_length) * mass;
  };

  auto walk_term = [&](const Vertex& label) -> QuadExt {
    Portrait k = Portrait::path_rotation(H.F, ray_floor, label);
    // A depth-n witness k' must map xi exactly onto (t f1)^{-1} f2 k (xi),
    // which pins its cell label; any other cell cannot certify.
    RayWalkResult kw = walk_tight(k, H.xi);
    if (!kw.image_end) throw InsufficientDepth("bound_integral: cell end not certified");
    RayWalkResult tw = walk_tight(target_map, *kw.image_end);
    if (!tw.image_end) throw InsufficientDepth("bound_integral: target end not certified");
    const BoundaryPoint& tau = *tw.image_end;
    Portrait kprime;
    try {
      kprime = Portrait::path_rotation(H.F, ray_floor, tau.ray_vertex(depth));
    } catch (const std::invalid_argument&) {
      return QuadExt();  // target leaves the cell complex: not in the intersection
    }
    RayWalkResult pw = walk_tight(kprime, H.xi);
    if (!pw.image_end || !(*pw.image_end == tau)) return QuadExt();
    Portrait h = compose(inverse(compose(f2, k)), compose(lead, kprime));
    int per = std::max<int>(1, static_cast<int>(H.xi.period().size()));
    std::optional<RayWalkResult> hw;
    try {
      hw = membership_walk(H, h,
                           h.token_depth() + static_cast<int>(H.xi.prefix().size()) + 2 * per + 3);
    } catch (const InsufficientDepth&) {
      hw = membership_walk(H, h);
    }
    if (!hw) return QuadExt();
    if (H.kind != ParabolicKind::FullFixator) return QuadExt::of_rational(mass);
    if (rho.gamma_length <= 0 || hw->busemann_shift % rho.gamma_length != 0)
      throw std::logic_error("bound_integral: shift is not a multiple of the minimal length");
    long m = hw->busemann_shift / rho.gamma_length;
    return QuadExt::half_power(rho.delta, -m) * mass;
  };

  auto cell_term = [&](const Vertex& label) -> QuadExt {
    return flat ? fast_term(label) : walk_term(label);
  };

  unsigned workers = worker_count(static_cast<unsigned>(labels.size() / 64 + 1));
  if (workers <= 1) {
    QuadExt sum;
    for (const Vertex& label : labels) sum += cell_term(label);
    return sum;
  }

  std::vector<QuadExt> partial(workers);
  std::vector<std::exception_ptr> errors(workers);
  std::atomic<std::size_t> next{0};
  constexpr std::size_t kChunk = 64;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned wi = 0; wi < workers; ++wi) {
    pool.emplace_back([&, wi]() {
      try {
        for (std::size_t at = next.fetch_add(kChunk); at < labels.size();
             at = next.fetch_add(kChunk)) {
          std::size_t stop = std::min(labels.size(), at + kChunk);
          for (std::size_t i = at; i < stop; ++i) partial[wi] += cell_term(labels[i]);
        }
      } catch (...) {
        errors[wi] = std::current_exception();
      }
    });
  }
  for (std::thread& th : pool) th.join();
  for (std::exception_ptr& err : errors)
    if (err) std::rethrow_exception(err);
  QuadExt sum;
  for (const QuadExt& part : partial) sum += part;
  return sum;
}

QuadExt sn_sequence(int d, int p, const Rational& t, long M) {
  if (d < 3) throw std::invalid_argument("sn_sequence: degree must be at least 3");
  if (p < 1) throw std::invalid_argument("sn_sequence: period must be positive");
  if (M < 2 || M % 2 != 0)
    throw std::invalid_argument("sn_sequence: displacement must be even and at least 2");
  Rational lower = Rational(BigInt(1), ipow(d - 1, 2 * p));
  if (t < lower || t >= 1)
    throw std::invalid_argument("sn_sequence: ratio outside [1/(d-1)^{2p}, 1)");

  long m = M / (2 * p);
  long r = (M - 2 * p * m) / 2;

  QuadExt sum;
  for (long k = 0; k <= m / 2; ++k) {
    Rational coef = (r == 0 && k == 0)
                        ? Rational(1)
                        : Rational(BigInt(1), BigInt(d) * ipow(d - 1, r + 2 * p * k - 1));
    sum += QuadExt::half_power(t, m - 2 * k) * coef;
  }
  if (m % 2 == 0)
    sum += QuadExt::of_rational(Rational(BigInt(1), BigInt(d) * ipow(d - 1, M / 2 - 1)));
  for (long j = 1; j <= m; ++j) {
    Rational coef(BigInt(1), BigInt(d) * ipow(d - 1, (M + 2 * p * j) / 2 - 1));
    sum += QuadExt::half_power(t, -j) * coef;
  }
  return sum;
}

DecayReport decay_experiment(const ExperimentConfig& cfg) {
  GroupPtr F = make_group(cfg);
  ParabolicSpec H = make_parabolic(cfg, F);
  Portrait f1 = make_portrait(F, cfg.f1);
  Portrait f2 = make_portrait(F, cfg.f2);

  // The power schedule always runs along the minimal certified ray
  // translation of the ambient end stabilizer, whatever the subgroup kind.
  ParabolicSpec ambient = full_fixator(F, H.xi);
  MinimalHyperbolic mh = minimal_hyperbolic(ambient);
  Rational delta_ambient = modular_value(ambient, mh.gamma);
  RhoFunction rho = make_rho(H);

  // Pure left multiplications stay flat under powers; keeping the portrait a
  // leaf keeps every apply in the cell loop shallow.
  bool flat = mh.gamma.is_leaf() && mh.gamma.leaf_entries().empty() && H.xi.prefix().empty() &&
              mh.length % static_cast<int>(H.xi.period().size()) == 0 &&
              mh.gamma.apply(Vertex::base()) == H.xi.ray_vertex(mh.length);
  auto power = [&](int n) {
    if (flat) return Portrait::left_mult(F, H.xi.ray_vertex(mh.length * n));
    return mh.gamma.pow(n);
  };

  int count = cfg.n_max;
  std::vector<DecayRow> rows;
  rows.reserve(count);
  for (int idx = 0; idx < count; ++idx) {
    int n = idx + 1;
    DecayRow row;
    row.n = n;
    Portrait tn = power(n);
    Portrait gn = compose(inverse(f2), compose(tn, f1));
    int Mn = dist(Vertex::base(), gn.apply(Vertex::base()));
    if (Mn < 2 || Mn % 2 != 0)
      throw std::invalid_argument("decay_experiment: row " + std::to_string(n) +
                                  " has displacement " + std::to_string(Mn) +
                                  ", which admits no comparison series");
    row.tn_dist = Mn;
    int needed = H.kind == ParabolicKind::FullFixator ? Mn : Mn / 2;
    row.depth = std::max(cfg.depth, needed);
    row.bound = bound_integral(rho, tn, f1, f2, row.depth);
    row.sn = sn_sequence(F->degree(), mh.length / 2, delta_ambient, Mn);
    row.fixator_term = Rational(BigInt(1), fixator_index(*F, H.xi.ray_vertex(Mn / 2)));
    rows.push_back(std::move(row));
  }

  DecayReport report;
  report.rows = std::move(rows);
  report.primary = H.kind == ParabolicKind::FullFixator ? "bound" : "fixator";

  long C = 1;
  for (const DecayRow& row : report.rows) {
    long hi = 1;
    while ((row.sn * Rational(hi) - row.bound).sign() < 0) {
      hi *= 2;
      if (hi > (1L << 40))
        throw std::logic_error("decay_experiment: no finite domination constant in range");
    }
    long lo = hi > 1 ? hi / 2 + 1 : 1;
    while (lo < hi) {
      long mid = lo + (hi - lo) / 2;
      if ((row.sn * Rational(mid) - row.bound).sign() >= 0)
        hi = mid;
      else
        lo = mid + 1;
    }
    C = std::max(C, hi);
  }
  report.C = Rational(C);
  report.dominated = true;

  std::vector<QuadExt> series;
  series.reserve(report.rows.size());
  for (const DecayRow& row : report.rows)
    series.push_back(report.primary == "bound" ? row.bound
                                               : QuadExt::of_rational(row.fixator_term));
  std::size_t i0 = series.empty() ? 0 : series.size() - 1;
  while (i0 > 0 && (series[i0 - 1] - series[i0]).sign() > 0) --i0;
  std::size_t suffix = series.size() - i0;
  report.eventually_decreasing =
      series.size() <= 1 || suffix >= std::min<std::size_t>(3, series.size());
  report.final_small =
      !series.empty() && (series.back() - series.front() * cfg.final_ratio).sign() <= 0;
  return report;
}

std::string decay_csv(const DecayReport& report, const ExperimentConfig& cfg) {
  GroupPtr F = make_group(cfg);
  std::ostringstream out;
  out << "# d=" << cfg.d << " |F|=" << F->order() << " H=" << kind_name(cfg.kind)
      << " xi=" << cfg.xi << " version=" << kVersion << "\n";
  out << "n,tn_dist,bound_integral_lo,bound_integral_hi,sn,fixator_term,C\n";
  for (const DecayRow& row : report.rows) {
    DoubleInterval iv = row.bound.to_interval();
    out << row.n << ',' << row.tn_dist << ',' << fmt_double(iv.lo) << ',' << fmt_double(iv.hi)
        << ',' << fmt_double(row.sn.to_double()) << ','
        << fmt_double(row.fixator_term.convert_to<double>()) << ',' << to_string(report.C)
        << "\n";
  }
  return out.str();
}

std::string domains_csv(const std::vector<SolutionDomain>& domains,
                        const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "# d=" << cfg.d << " H=" << kind_name(cfg.kind) << " xi=" << cfg.xi
      << " version=" << kVersion << "\n";
  out << "label_i,m_class,x_h,domain_size\n";
  for (const SolutionDomain& dom : domains)
    for (const SolutionEntry& s : dom.solutions)
      out << vertex_name(s.k2_label) << ',' << dom.m << ',' << vertex_name(dom.x_h) << ','
          << dom.solutions.size() << "\n";
  return out.str();
}

}  // namespace arboreal
