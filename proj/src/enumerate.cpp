#include "dblcat/enumerate.hpp"

#include <map>
#include <mutex>
#include <set>

namespace dblcat {

namespace {

enum Kind { kOb = 0, kH = 1, kV = 2, kS = 3 };

class LiftSearch {
 public:
  explicit LiftSearch(const LiftProblem& pr) : pr_(pr), S_(*pr.shape), D_(*pr.target) {
    if (pr_.p && !pr_.base) throw ContractError("lift problem: base map missing");
    off_[kOb] = 0;
    off_[kH] = S_.num_objects();
    off_[kV] = off_[kH] + S_.num_h();
    off_[kS] = off_[kV] + S_.num_v();
    total_ = off_[kS] + S_.num_s();
    assign_.assign(total_, -1);
    cap_ = pr_.cap ? pr_.cap : default_cell_cap();
    build_triples();
    build_buckets();
    build_order();
  }

  std::size_t run(const std::function<bool(const DoubleFunctor&)>& visit) {
    visit_ = &visit;
    if (!pr_.fixed_objects.empty()) {
      for (int x = 0; x < S_.num_objects(); ++x)
        if (pr_.fixed_objects[x] >= 0 && !set(x, pr_.fixed_objects[x])) return 0;
    }
    if (!propagate()) return 0;
    dfs(0);
    return emitted_;
  }

 private:
  struct Triple {
    int g, f, gf;
    Kind kind;  // kH, kV for arrows; kS with horizontal flag for squares
    bool horizontal;
  };

  const LiftProblem& pr_;
  const FinDoubleCategory& S_;
  const FinDoubleCategory& D_;
  int off_[4];
  int total_ = 0;
  std::vector<int> assign_;
  std::vector<int> trail_;
  std::vector<int> queue_;
  std::vector<Triple> triples_;
  std::vector<std::vector<int>> cell_triples_;
  std::vector<int> order_;
  std::vector<std::vector<int>> bucket_[4];  // D cells by base image, or all
  std::size_t cap_ = 0, emitted_ = 0, nodes_ = 0;
  bool stop_ = false;
  const std::function<bool(const DoubleFunctor&)>* visit_ = nullptr;

  Kind kind_of(int c) const {
    if (c < off_[kH]) return kOb;
    if (c < off_[kV]) return kH;
    if (c < off_[kS]) return kV;
    return kS;
  }

  int base_image(Kind k, int local) const {
    switch (k) {
      case kOb: return pr_.base->ob[local];
      case kH: return pr_.base->h[local];
      case kV: return pr_.base->v[local];
      default: return pr_.base->s[local];
    }
  }

  int p_image(Kind k, int d) const {
    switch (k) {
      case kOb: return pr_.p->ob[d];
      case kH: return pr_.p->h[d];
      case kV: return pr_.p->v[d];
      default: return pr_.p->s[d];
    }
  }

  void build_triples() {
    cell_triples_.assign(total_, {});
    auto add = [&](int g, int f, int gf, Kind k, bool hor) {
      int id = static_cast<int>(triples_.size());
      triples_.push_back({g, f, gf, k, hor});
      cell_triples_[g].push_back(id);
      cell_triples_[f].push_back(id);
      cell_triples_[gf].push_back(id);
    };
    S_.h_comp.for_each([&](int g, int f, int gf) {
      add(off_[kH] + g, off_[kH] + f, off_[kH] + gf, kH, true);
    });
    S_.v_comp.for_each([&](int g, int f, int gf) {
      add(off_[kV] + g, off_[kV] + f, off_[kV] + gf, kV, false);
    });
    S_.s_hcomp.for_each([&](int t, int s, int ts) {
      add(off_[kS] + t, off_[kS] + s, off_[kS] + ts, kS, true);
    });
    S_.s_vcomp.for_each([&](int t, int s, int ts) {
      add(off_[kS] + t, off_[kS] + s, off_[kS] + ts, kS, false);
    });
  }

  void build_buckets() {
    const int counts[4] = {D_.num_objects(), D_.num_h(), D_.num_v(), D_.num_s()};
    const int ccounts[4] = {
        pr_.p ? pr_.p->target->num_objects() : 1, pr_.p ? pr_.p->target->num_h() : 1,
        pr_.p ? pr_.p->target->num_v() : 1, pr_.p ? pr_.p->target->num_s() : 1};
    for (int k = 0; k < 4; ++k) {
      bucket_[k].assign(ccounts[k], {});
      for (int d = 0; d < counts[k]; ++d)
        bucket_[k][pr_.p ? p_image(static_cast<Kind>(k), d) : 0].push_back(d);
    }
  }

  bool decomposable(int c) const {
    for (int t : cell_triples_[c]) {
      const Triple& tr = triples_[t];
      if (tr.gf != c || tr.g == c || tr.f == c) continue;
      Kind k = kind_of(c);
      int g = tr.g - off_[k], f = tr.f - off_[k];
      bool unit_g, unit_f;
      if (k == kH) {
        unit_g = S_.h_is_id(g);
        unit_f = S_.h_is_id(f);
      } else if (k == kV) {
        unit_g = S_.v_is_id(g);
        unit_f = S_.v_is_id(f);
      } else if (tr.horizontal) {
        unit_g = S_.s_hid[S_.s_left[g]] == g;
        unit_f = S_.s_hid[S_.s_left[f]] == f;
      } else {
        unit_g = S_.s_vid[S_.s_top[g]] == g;
        unit_f = S_.s_vid[S_.s_top[f]] == f;
      }
      if (!unit_g && !unit_f) return true;
    }
    return false;
  }

  void build_order() {
    const int no = S_.num_objects();
    std::vector<bool> seen(no, false);
    std::vector<int> gens_h, gens_v, rest;
    for (int f = 0; f < S_.num_h(); ++f)
      if (!S_.h_is_id(f)) (decomposable(off_[kH] + f) ? rest : gens_h).push_back(off_[kH] + f);
    for (int f = 0; f < S_.num_v(); ++f)
      if (!S_.v_is_id(f)) (decomposable(off_[kV] + f) ? rest : gens_v).push_back(off_[kV] + f);
    std::vector<std::vector<int>> adj(no);
    auto link = [&](int c, int a, int b) {
      adj[a].push_back(c);
      adj[b].push_back(c);
    };
    for (int c : gens_h) link(c, S_.h_src[c - off_[kH]], S_.h_tgt[c - off_[kH]]);
    for (int c : gens_v) link(c, S_.v_src[c - off_[kV]], S_.v_tgt[c - off_[kV]]);
    std::vector<bool> used(total_, false);
    for (int root = 0; root < no; ++root) {
      if (seen[root]) continue;
      seen[root] = true;
      order_.push_back(root);
      std::vector<int> q{root};
      for (std::size_t qi = 0; qi < q.size(); ++qi) {
        for (int c : adj[q[qi]]) {
          if (used[c]) continue;
          used[c] = true;
          order_.push_back(c);
          Kind k = kind_of(c);
          int l = c - off_[k];
          int a = k == kH ? S_.h_src[l] : S_.v_src[l];
          int b = k == kH ? S_.h_tgt[l] : S_.v_tgt[l];
          for (int x : {a, b})
            if (!seen[x]) {
              seen[x] = true;
              q.push_back(x);
            }
        }
      }
    }
    for (int c : rest) order_.push_back(c);
    std::vector<int> sq_rest;
    for (int s = 0; s < S_.num_s(); ++s) {
      if (S_.s_hid[S_.s_left[s]] == s || S_.s_vid[S_.s_top[s]] == s) continue;
      (decomposable(off_[kS] + s) ? sq_rest : order_).push_back(off_[kS] + s);
    }
    for (int c : sq_rest) order_.push_back(c);
  }

  bool set(int c, int val) {
    if (val < 0) return false;
    if (assign_[c] >= 0) return assign_[c] == val;
    Kind k = kind_of(c);
    int l = c - off_[k];
    if (pr_.p && p_image(k, val) != base_image(k, l)) return false;
    if (pr_.shape_marked && pr_.target_marked) {
      Kind mk = pr_.direction == MarkDirection::Vertical ? kV : kH;
      if (k == mk && (*pr_.shape_marked)[l] && !(*pr_.target_marked)[val]) return false;
    }
    assign_[c] = val;
    trail_.push_back(c);
    queue_.push_back(c);
    return true;
  }

  bool propagate() {
    while (!queue_.empty()) {
      int c = queue_.back();
      queue_.pop_back();
      Kind k = kind_of(c);
      int l = c - off_[k];
      int val = assign_[c];
      bool ok = true;
      switch (k) {
        case kOb:
          ok = set(off_[kH] + S_.h_id[l], D_.h_id[val]) && set(off_[kV] + S_.v_id[l], D_.v_id[val]);
          break;
        case kH:
          ok = set(S_.h_src[l], D_.h_src[val]) && set(S_.h_tgt[l], D_.h_tgt[val]) &&
               set(off_[kS] + S_.s_vid[l], D_.s_vid[val]);
          break;
        case kV:
          ok = set(S_.v_src[l], D_.v_src[val]) && set(S_.v_tgt[l], D_.v_tgt[val]) &&
               set(off_[kS] + S_.s_hid[l], D_.s_hid[val]);
          break;
        case kS:
          ok = set(off_[kH] + S_.s_top[l], D_.s_top[val]) &&
               set(off_[kH] + S_.s_bot[l], D_.s_bot[val]) &&
               set(off_[kV] + S_.s_left[l], D_.s_left[val]) &&
               set(off_[kV] + S_.s_right[l], D_.s_right[val]);
          break;
      }
      if (!ok) return false;
      if (k == kOb) {
        for (const auto* xs : {&S_.h_out[l], &S_.h_in[l]})
          for (int f : *xs)
            if (!forward(off_[kH] + f)) return false;
        for (const auto* xs : {&S_.v_out[l], &S_.v_in[l]})
          for (int f : *xs)
            if (!forward(off_[kV] + f)) return false;
      } else if (k == kH) {
        for (const auto* xs : {&S_.s_by_top[l], &S_.s_by_bot[l]})
          for (int s : *xs)
            if (!forward(off_[kS] + s)) return false;
      } else if (k == kV) {
        for (const auto* xs : {&S_.s_by_left[l], &S_.s_by_right[l]})
          for (int s : *xs)
            if (!forward(off_[kS] + s)) return false;
      }
      for (int t : cell_triples_[c]) {
        const Triple& tr = triples_[t];
        int g = assign_[tr.g], f = assign_[tr.f];
        if (g < 0 || f < 0) continue;
        int gf;
        if (tr.kind == kH) gf = D_.hcomp(g, f);
        else if (tr.kind == kV) gf = D_.vcomp(g, f);
        else if (tr.horizontal) gf = D_.shcomp(g, f);
        else gf = D_.svcomp(g, f);
        if (!set(tr.gf, gf)) return false;
      }
    }
    return true;
  }

  // Value val for cell c agrees with the base, the marking and every assigned
  // boundary cell.
  bool admissible(int c, int val) const {
    Kind k = kind_of(c);
    int l = c - off_[k];
    if (pr_.p && p_image(k, val) != base_image(k, l)) return false;
    if (pr_.shape_marked && pr_.target_marked) {
      Kind mk = pr_.direction == MarkDirection::Vertical ? kV : kH;
      if (k == mk && (*pr_.shape_marked)[l] && !(*pr_.target_marked)[val]) return false;
    }
    auto agree = [&](int cell, int v) { return assign_[cell] < 0 || assign_[cell] == v; };
    switch (k) {
      case kH:
        return agree(S_.h_src[l], D_.h_src[val]) && agree(S_.h_tgt[l], D_.h_tgt[val]);
      case kV:
        return agree(S_.v_src[l], D_.v_src[val]) && agree(S_.v_tgt[l], D_.v_tgt[val]);
      case kS:
        return agree(off_[kH] + S_.s_top[l], D_.s_top[val]) && agree(off_[kH] + S_.s_bot[l], D_.s_bot[val]) &&
               agree(off_[kV] + S_.s_left[l], D_.s_left[val]) &&
               agree(off_[kV] + S_.s_right[l], D_.s_right[val]);
      default:
        return true;
    }
  }

  // Fails when an unassigned cell has no admissible value left; assigns it
  // when exactly one remains.
  bool forward(int c) {
    if (assign_[c] >= 0) return true;
    int only = -1, count = 0;
    for (int val : candidates(c)) {
      if (!admissible(c, val)) continue;
      if (++count > 1) return true;
      only = val;
    }
    if (count == 0) return false;
    return set(c, only);
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      assign_[trail_.back()] = -1;
      trail_.pop_back();
    }
    queue_.clear();
  }

  const std::vector<int>& candidates(int c) {
    Kind k = kind_of(c);
    int l = c - off_[k];
    auto a = [&](int cell) { return assign_[cell]; };
    switch (k) {
      case kH:
        if (a(S_.h_src[l]) >= 0) return D_.h_out[a(S_.h_src[l])];
        if (a(S_.h_tgt[l]) >= 0) return D_.h_in[a(S_.h_tgt[l])];
        break;
      case kV:
        if (a(S_.v_src[l]) >= 0) return D_.v_out[a(S_.v_src[l])];
        if (a(S_.v_tgt[l]) >= 0) return D_.v_in[a(S_.v_tgt[l])];
        break;
      case kS:
        if (a(off_[kV] + S_.s_left[l]) >= 0) return D_.s_by_left[a(off_[kV] + S_.s_left[l])];
        if (a(off_[kH] + S_.s_top[l]) >= 0) return D_.s_by_top[a(off_[kH] + S_.s_top[l])];
        if (a(off_[kV] + S_.s_right[l]) >= 0) return D_.s_by_right[a(off_[kV] + S_.s_right[l])];
        if (a(off_[kH] + S_.s_bot[l]) >= 0) return D_.s_by_bot[a(off_[kH] + S_.s_bot[l])];
        break;
      default:
        break;
    }
    return bucket_[k][pr_.p ? base_image(k, l) : 0];
  }

  void emit() {
    if (++emitted_ > cap_) throw ResourceLimit("lift enumeration exceeded cap of " + std::to_string(cap_));
    DoubleFunctor f{pr_.shape, pr_.target, {}, {}, {}, {}};
    f.ob.assign(assign_.begin(), assign_.begin() + off_[kH]);
    f.h.assign(assign_.begin() + off_[kH], assign_.begin() + off_[kV]);
    f.v.assign(assign_.begin() + off_[kV], assign_.begin() + off_[kS]);
    f.s.assign(assign_.begin() + off_[kS], assign_.end());
    if (!(*visit_)(f)) stop_ = true;
  }

  void dfs(std::size_t pos) {
    if (stop_) return;
    if (++nodes_ > 64 * cap_) throw ResourceLimit("lift search exceeded node budget");
    while (pos < order_.size() && assign_[order_[pos]] >= 0) ++pos;
    if (pos == order_.size()) {
      emit();
      return;
    }
    const int c = order_[pos];
    const std::vector<int>& cands = candidates(c);
    for (int val : cands) {
      std::size_t mark = trail_.size();
      if (set(c, val) && propagate()) dfs(pos + 1);
      undo(mark);
      if (stop_) return;
    }
  }
};

}  // namespace

std::size_t enumerate_lifts(const LiftProblem& problem,
                            const std::function<bool(const DoubleFunctor&)>& visit) {
  LiftSearch s(problem);
  return s.run(visit);
}

std::vector<DoubleFunctor> all_lifts(const LiftProblem& problem) {
  std::vector<DoubleFunctor> out;
  enumerate_lifts(problem, [&](const DoubleFunctor& f) {
    out.push_back(f);
    return true;
  });
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

DoublePtr cached_grid(int m, int n) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, DoublePtr> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{m, n}];
  if (!slot) slot = std::make_shared<const FinDoubleCategory>(grid(m, n));
  return slot;
}

DoubleFunctor grid_inclusion(int m, int n, int a, int b, bool columns, int i) {
  // Inclusion of grid(a, b) into grid(m, n) at column (or row) offset i.
  auto src = cached_grid(a, b);
  auto tgt = cached_grid(m, n);
  std::vector<int> ob;
  for (int x = 0; x <= a; ++x)
    for (int y = 0; y <= b; ++y) ob.push_back(columns ? (x + i) * (n + 1) + y : x * (n + 1) + y + i);
  ThinIndex tix(*tgt);
  return *thin_extend(src, tgt, tix, ob);
}

}  // namespace

std::vector<DoubleFunctor> nerve_eval(DoublePtr d, int m, int n, std::size_t cap) {
  if (m < 0 || n < 0) throw ContractError("nerve_eval: negative degree");
  LiftProblem pr;
  pr.shape = cached_grid(m, n);
  pr.target = std::move(d);
  pr.cap = cap;
  return all_lifts(pr);
}

DoubleFunctor restrict_columns(const DoubleFunctor& f, int m, int n, int i) {
  return compose(f, grid_inclusion(m, n, 1, n, true, i));
}

DoubleFunctor restrict_rows(const DoubleFunctor& f, int m, int n, int i) {
  return compose(f, grid_inclusion(m, n, m, 1, false, i));
}

namespace {

using Key = std::vector<int>;

Key key_of(const DoubleFunctor& f) {
  Key k = f.ob;
  k.push_back(-1);
  k.insert(k.end(), f.h.begin(), f.h.end());
  k.push_back(-1);
  k.insert(k.end(), f.v.begin(), f.v.end());
  k.push_back(-1);
  k.insert(k.end(), f.s.begin(), f.s.end());
  return k;
}

// One direction: N(m, n) against chains of N(1, n) glued along N(0, n).
bool segal_one(DoublePtr d, int m, int n, std::size_t cap, SegalReport& rep, bool columns) {
  const int len = columns ? m : n;
  if (len < 2) return true;
  const int a = columns ? 1 : m, b = columns ? n : 1;
  auto big = nerve_eval(d, m, n, cap);
  auto pieces = nerve_eval(d, a, b, cap);
  auto face0 = grid_inclusion(a, b, columns ? 0 : a, columns ? b : 0, columns, 0);
  auto face1 = grid_inclusion(a, b, columns ? 0 : a, columns ? b : 0, columns, 1);
  std::map<Key, std::vector<int>> by_start;  // edge start key -> piece indices
  std::vector<Key> piece_end(pieces.size());
  std::set<Key> piece_keys;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    by_start[key_of(compose(pieces[i], face0))].push_back(static_cast<int>(i));
    piece_end[i] = key_of(compose(pieces[i], face1));
    piece_keys.insert(key_of(pieces[i]));
  }
  // Count glued chains of length len by dynamic programming on pieces.
  std::vector<std::size_t> ways(pieces.size(), 1);
  for (int step = 1; step < len; ++step) {
    std::vector<std::size_t> next(pieces.size(), 0);
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      if (!ways[i]) continue;
      auto it = by_start.find(piece_end[i]);
      if (it == by_start.end()) continue;
      for (int j : it->second) next[j] += ways[i];
    }
    ways = std::move(next);
  }
  std::size_t chains = 0;
  for (auto w : ways) chains += w;
  std::set<std::vector<Key>> images;
  for (auto& f : big) {
    std::vector<Key> tuple;
    for (int i = 0; i < len; ++i) {
      auto r = columns ? restrict_columns(f, m, n, i) : restrict_rows(f, m, n, i);
      Key k = key_of(r);
      if (!piece_keys.count(k)) {
        rep.detail = "restriction is not a lower-degree cell";
        return false;
      }
      tuple.push_back(std::move(k));
    }
    images.insert(std::move(tuple));
  }
  rep.lhs += big.size();
  rep.rhs += chains;
  if (images.size() != big.size()) {
    rep.detail = std::string(columns ? "horizontal" : "vertical") + " restriction not injective";
    return false;
  }
  if (big.size() != chains) {
    rep.detail = std::string(columns ? "horizontal" : "vertical") + " count " +
                 std::to_string(big.size()) + " vs glued " + std::to_string(chains);
    return false;
  }
  return true;
}

}  // namespace

SegalReport segal_check(DoublePtr d, int m, int n, std::size_t cap) {
  SegalReport rep;
  rep.ok = segal_one(d, m, n, cap, rep, true) && segal_one(d, m, n, cap, rep, false);
  return rep;
}

}  // namespace dblcat
