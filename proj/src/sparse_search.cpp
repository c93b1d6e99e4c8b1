#include "toruskit/sparse_search.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <numeric>
#include <thread>

#include "toruskit/errors.hpp"

namespace toruskit {

namespace {

// Sets of vectors in GF(2)^d (d <= 6) as bitmasks over the 2^d elements.
using Mask = std::uint64_t;

Mask bit_of(std::uint64_t v) { return Mask{1} << v; }

// Order of sorted member lists, read off the smallest element of the symmetric difference.
bool mask_less(Mask a, Mask b) {
  Mask diff = a ^ b;
  if (diff == 0) return false;
  return (a & (diff & (~diff + 1))) != 0;
}

struct CosetTable {
  Mask span_nonzero = 0;           // nonzero elements of U
  std::size_t dim = 0;
  std::vector<Mask> cosets;        // 8 masks partitioning V
};

std::vector<CosetTable> codim3_tables(std::size_t d) {
  std::vector<CosetTable> out;
  if (d < 3) return out;
  const std::size_t k = d - 3;
  const std::uint64_t n = std::uint64_t{1} << d;
  std::vector<Mask> seen;
  // every k-dimensional subspace, found from independent k-tuples
  std::vector<Z2Vector> tuple;
  auto rec = [&](auto&& self, std::uint64_t start, const Subspace& current) -> void {
    if (current.dim() == k) {
      Mask m = 0;
      for (auto e : current.elements()) m |= bit_of(e.bits);
      if (std::find(seen.begin(), seen.end(), m) != seen.end()) return;
      seen.push_back(m);
      CosetTable t;
      t.span_nonzero = m & ~Mask{1};
      t.dim = k;
      std::vector<Z2Vector> reps;
      for (std::uint64_t v = 0; v < n; ++v) reps.push_back(current.reduce({v}));
      std::vector<Z2Vector> distinct = reps;
      std::sort(distinct.begin(), distinct.end());
      distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
      t.cosets.assign(distinct.size(), 0);
      for (std::uint64_t v = 0; v < n; ++v) {
        auto idx = std::lower_bound(distinct.begin(), distinct.end(), reps[v]) - distinct.begin();
        t.cosets[static_cast<std::size_t>(idx)] |= bit_of(v);
      }
      out.push_back(std::move(t));
      return;
    }
    for (std::uint64_t v = start; v < n; ++v) {
      Subspace next = current;
      if (next.insert({v})) self(self, v + 1, next);
    }
  };
  rec(rec, 1, Subspace(d));
  return out;
}

std::size_t mask_rank(Mask m) {
  Subspace s(kMaxZ2Dim);
  while (m) {
    std::uint64_t v = static_cast<std::uint64_t>(std::countr_zero(m));
    s.insert({v});
    m &= m - 1;
  }
  return s.dim();
}

bool violates(Mask s, const std::vector<CosetTable>& tables) {
  for (const auto& t : tables) {
    Mask inside = s & t.span_nonzero;
    // U must be spanned by members of S; two distinct nonzero vectors always span a plane
    if (t.dim == 1 && inside == 0) continue;
    if (t.dim == 2 && std::popcount(inside) < 2) continue;
    if (t.dim > 2 && mask_rank(inside) < t.dim) continue;
    bool surjective = std::all_of(t.cosets.begin(), t.cosets.end(), [&](Mask c) { return (s & c) != 0; });
    if (surjective) return true;
  }
  return false;
}

struct Searcher {
  std::size_t d;
  Mask basis_mask = 1;  // 0 and the unit vectors
  std::vector<std::uint64_t> candidates;
  std::vector<CosetTable> tables;
  std::vector<std::array<std::uint8_t, 64>> perms;  // coordinate permutations acting on vectors
  std::optional<std::chrono::steady_clock::time_point> deadline;
  std::atomic<bool>* expired = nullptr;

  explicit Searcher(std::size_t dim) : d(dim), tables(codim3_tables(dim)) {
    const std::uint64_t n = std::uint64_t{1} << d;
    for (std::size_t i = 0; i < d; ++i) basis_mask |= bit_of(std::uint64_t{1} << i);
    for (std::uint64_t v = 1; v < n; ++v) {
      if (!(basis_mask & bit_of(v))) candidates.push_back(v);
    }
    std::vector<std::size_t> p(d);
    std::iota(p.begin(), p.end(), 0);
    do {
      std::array<std::uint8_t, 64> table{};
      for (std::uint64_t v = 0; v < n; ++v) {
        std::uint64_t w = 0;
        for (std::size_t i = 0; i < d; ++i) {
          if ((v >> i) & 1U) w |= std::uint64_t{1} << p[i];
        }
        table[v] = static_cast<std::uint8_t>(w);
      }
      perms.push_back(table);
    } while (std::next_permutation(p.begin(), p.end()));
  }

  bool canonical(Mask t) const {
    for (const auto& table : perms) {
      Mask image = 0;
      for (Mask rest = t; rest; rest &= rest - 1) image |= bit_of(table[std::countr_zero(rest)]);
      if (mask_less(image, t)) return false;
    }
    return true;
  }

  struct Partial {
    std::size_t best = 0;
    std::vector<Mask> maximizers;
    std::uint64_t nodes = 0;
  };

  void record(Mask t, Partial& out) const {
    std::size_t size = static_cast<std::size_t>(std::popcount(t));
    if (size > out.best) {
      out.best = size;
      out.maximizers.clear();
    }
    if (size == out.best) out.maximizers.push_back(t);
  }

  void check_deadline(Partial& out) const {
    if ((++out.nodes & 0xfff) != 1 || !deadline) return;
    if (expired->load() || std::chrono::steady_clock::now() > *deadline) {
      expired->store(true);
      throw BudgetExceeded("search budget exhausted");
    }
  }

  // T extends only by candidates larger than its maximum element.
  void dfs(Mask t, std::size_t next_index, Partial& out) const {
    check_deadline(out);
    record(t, out);
    for (std::size_t i = next_index; i < candidates.size(); ++i) {
      Mask child = t | bit_of(candidates[i]);
      if (violates(child | basis_mask, tables)) continue;
      if (!canonical(child)) continue;
      dfs(child, i + 1, out);
    }
  }
};

// Branch and bound over ordered bases taken from S.
class CanonicalForm {
 public:
  CanonicalForm(std::size_t d, const std::vector<std::uint64_t>& members) : d_(d), members_(members) {
    for (auto m : members_) set_mask_ |= bit_of(m);
  }

  std::vector<std::uint64_t> run() {
    std::vector<std::uint64_t> coord_of(std::size_t{1} << d_, 0);
    std::vector<std::uint64_t> span{0};
    extend(0, span, coord_of);
    return best_;
  }

 private:
  // Compare the coordinates below 2^k against the incumbent; shorter loses.
  int compare_prefix(const std::vector<std::uint64_t>& prefix, std::size_t k) const {
    if (best_.empty()) return -1;
    std::uint64_t limit = std::uint64_t{1} << k;
    std::size_t n = 0;
    while (n < best_.size() && best_[n] < limit) ++n;
    for (std::size_t i = 0; i < std::min(n, prefix.size()); ++i) {
      if (prefix[i] != best_[i]) return prefix[i] < best_[i] ? -1 : 1;
    }
    if (prefix.size() == n) return 0;
    return prefix.size() > n ? -1 : 1;
  }

  void extend(std::size_t k, const std::vector<std::uint64_t>& span, std::vector<std::uint64_t>& coord_of) {
    std::vector<std::uint64_t> prefix;
    for (auto v : span) {
      if (set_mask_ & bit_of(v)) prefix.push_back(coord_of[v]);
    }
    std::sort(prefix.begin(), prefix.end());
    int c = compare_prefix(prefix, k);
    if (c > 0) return;
    if (k == d_) {
      if (c < 0) best_ = prefix;
      return;
    }
    Mask span_mask = 0;
    for (auto v : span) span_mask |= bit_of(v);
    for (auto m : members_) {
      if (span_mask & bit_of(m)) continue;
      std::vector<std::uint64_t> next = span;
      for (auto v : span) {
        next.push_back(v ^ m);
        coord_of[v ^ m] = coord_of[v] | (std::uint64_t{1} << k);
      }
      extend(k + 1, next, coord_of);
    }
  }

  std::size_t d_;
  std::vector<std::uint64_t> members_;
  Mask set_mask_ = 0;
  std::vector<std::uint64_t> best_;
};

}  // namespace

Z2Set gl_canonical_form(const Z2Set& s) {
  if (s.dim() > 6) throw CapabilityError("canonical form supports d <= 6");
  if (!s.is_generating()) throw PreconditionError("canonical form needs a generating set");
  std::vector<std::uint64_t> members;
  for (auto m : s.nonzero()) members.push_back(m.bits);
  auto coords = CanonicalForm(s.dim(), members).run();
  std::vector<Z2Vector> image;
  for (auto c : coords) image.push_back({c});
  return Z2Set(s.dim(), std::move(image));
}

SparseSearchResult enumerate_max_sparse(std::size_t d, const SearchOptions& options) {
  if (d < 1 || d > kMaxSearchDim) {
    throw CapabilityError("exhaustive sparse-set search supports 1 <= d <= " + std::to_string(kMaxSearchDim) +
                          ", got " + std::to_string(d));
  }
  Searcher searcher(d);
  std::atomic<bool> expired{false};
  searcher.deadline = options.deadline;
  searcher.expired = &expired;

  // First-level branches are independent subtrees; each worker takes every jobs-th one.
  std::vector<std::size_t> roots;
  for (std::size_t i = 0; i < searcher.candidates.size(); ++i) {
    Mask child = bit_of(searcher.candidates[i]);
    if (!violates(child | searcher.basis_mask, searcher.tables) && searcher.canonical(child)) roots.push_back(i);
  }
  unsigned jobs = std::max(1U, options.jobs);
  std::vector<Searcher::Partial> partials(jobs);
  std::vector<std::exception_ptr> errors(jobs);
  auto work = [&](unsigned w) {
    try {
      if (w == 0) searcher.record(0, partials[w]);
      for (std::size_t r = w; r < roots.size(); r += jobs) {
        std::size_t i = roots[r];
        searcher.dfs(bit_of(searcher.candidates[i]), i + 1, partials[w]);
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < jobs; ++w) threads.emplace_back(work, w);
    for (auto& t : threads) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  SparseSearchResult result;
  result.dim = d;
  std::size_t best = 0;
  for (const auto& p : partials) {
    best = std::max(best, p.best);
    result.nodes += p.nodes;
  }
  std::vector<std::vector<Z2Vector>> forms;
  for (const auto& p : partials) {
    if (p.best != best) continue;
    for (Mask t : p.maximizers) {
      std::vector<Z2Vector> members;
      for (Mask rest = t | searcher.basis_mask; rest; rest &= rest - 1) members.push_back({static_cast<std::uint64_t>(std::countr_zero(rest))});
      auto form = gl_canonical_form(Z2Set(d, members));
      forms.push_back(form.members());
    }
  }
  std::sort(forms.begin(), forms.end());
  forms.erase(std::unique(forms.begin(), forms.end()), forms.end());
  result.max_nonzero = best + d;
  for (auto& f : forms) result.classes.emplace_back(d, std::move(f));
  return result;
}

}  // namespace toruskit
