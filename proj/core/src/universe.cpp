#include "toposfactor/universe.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <thread>
#include <atomic>
#include <exception>
#include <mutex>

#include "toposfactor/constructions.hpp"

namespace toposfactor {

UniverseBounds bounds_from_env() {
  UniverseBounds b;
  const char* raw = std::getenv("TOPOSFACTOR_MAXOBJ");
  if (!raw || !*raw) return b;
  std::string text(raw);
  std::replace(text.begin(), text.end(), ',', ' ');
  std::istringstream in(text);
  long objects = -1;
  long parallel = static_cast<long>(b.max_parallel);
  in >> objects;
  if (!in || objects < 0) {
    throw Error(ErrorCode::PreconditionViolated, "TOPOSFACTOR_MAXOBJ must be N or N,P");
  }
  if (!(in >> std::ws).eof()) {
    in >> parallel;
    if (!in || parallel < 1) {
      throw Error(ErrorCode::PreconditionViolated, "TOPOSFACTOR_MAXOBJ must be N or N,P");
    }
  }
  b.max_objects = static_cast<std::size_t>(objects);
  b.max_parallel = static_cast<std::size_t>(parallel);
  return b;
}

namespace {

using Matrix = std::vector<std::vector<std::size_t>>;

struct Layout {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<std::vector<std::size_t>> offset;  // first id of hom(a, b)
  std::vector<ObjId> source;
  std::vector<ObjId> target;
  std::vector<std::size_t> position;  // index inside its hom-set

  explicit Layout(const Matrix& homs) : n(homs.size()), offset(n, std::vector<std::size_t>(n)) {
    for (ObjId a = 0; a < n; ++a) {
      for (ObjId b = 0; b < n; ++b) {
        offset[a][b] = m;
        for (std::size_t k = 0; k < homs[a][b]; ++k) {
          source.push_back(a);
          target.push_back(b);
          position.push_back(k);
        }
        m += homs[a][b];
      }
    }
  }
  MorId identity(ObjId a) const { return offset[a][a]; }
  bool is_identity(MorId f) const { return source[f] == target[f] && position[f] == 0; }
};

class TableSearch {
 public:
  TableSearch(const Matrix& homs, std::size_t limit, std::mt19937_64* rng)
      : homs_(homs), layout_(homs), limit_(limit), rng_(rng) {
    const std::size_t m = layout_.m;
    table_.assign(m * m, npos);
    for (MorId g = 0; g < m; ++g) {
      for (MorId f = 0; f < m; ++f) {
        if (layout_.source[g] != layout_.target[f]) continue;
        if (layout_.is_identity(g)) table_[g * m + f] = f;
        else if (layout_.is_identity(f)) table_[g * m + f] = g;
        else unknowns_.emplace_back(g, f);
      }
    }
  }

  // Abandons the search after this many visited nodes; 0 means unbounded.
  void set_budget(std::size_t nodes) { budget_ = nodes; }
  bool exhausted() const { return budget_ && nodes_ > budget_; }

  std::vector<FinCategory> run() {
    for (const auto& [g, f] : unknowns_) {
      if (homs_[layout_.source[f]][layout_.target[g]] == 0) return {};
    }
    search(0);
    return std::move(found_);
  }

 private:
  MorId at(MorId g, MorId f) const { return table_[g * layout_.m + f]; }

  bool triple_ok(MorId h, MorId g, MorId f) const {
    const MorId gf = at(g, f);
    const MorId hg = at(h, g);
    if (gf == npos || hg == npos) return true;
    const MorId left = at(h, gf);
    const MorId right = at(hg, f);
    return left == npos || right == npos || left == right;
  }

  bool consistent(MorId g, MorId f) const {
    const std::size_t m = layout_.m;
    const MorId x = at(g, f);
    for (MorId h = 0; h < m; ++h) {
      if (layout_.source[h] == layout_.target[g] && !triple_ok(h, g, f)) return false;
    }
    for (MorId e = 0; e < m; ++e) {
      if (layout_.target[e] == layout_.source[f] && !triple_ok(g, f, e)) return false;
    }
    // (g, f) as the outer composite of a triple.
    for (MorId a = 0; a < m; ++a) {
      for (MorId b = 0; b < m; ++b) {
        if (layout_.source[a] != layout_.target[b]) continue;
        const MorId ab = at(a, b);
        if (ab == f && !triple_ok(g, a, b)) return false;
        if (ab == g && !triple_ok(a, b, f)) return false;
      }
    }
    (void)x;
    return true;
  }

  void search(std::size_t k) {
    if (limit_ && found_.size() >= limit_) return;
    if (budget_ && ++nodes_ > budget_) return;
    if (k == unknowns_.size()) {
      found_.push_back(build());
      return;
    }
    const auto [g, f] = unknowns_[k];
    const ObjId a = layout_.source[f];
    const ObjId c = layout_.target[g];
    std::vector<MorId> values(homs_[a][c]);
    std::iota(values.begin(), values.end(), layout_.offset[a][c]);
    if (rng_) std::shuffle(values.begin(), values.end(), *rng_);
    for (MorId v : values) {
      table_[g * layout_.m + f] = v;
      if (consistent(g, f)) search(k + 1);
      if (limit_ && found_.size() >= limit_) break;
    }
    table_[g * layout_.m + f] = npos;
  }

  FinCategory build() const {
    std::vector<std::string> objects;
    for (ObjId a = 0; a < layout_.n; ++a) objects.push_back(std::to_string(a));
    std::vector<Morphism> mors;
    for (MorId f = 0; f < layout_.m; ++f) {
      const ObjId a = layout_.source[f];
      const ObjId b = layout_.target[f];
      std::string name;
      if (layout_.is_identity(f)) name = "id_" + objects[a];
      else if (a == b) name = std::string(1, static_cast<char>('d' + layout_.position[f])) + objects[a];
      else name = std::string(1, static_cast<char>('f' + layout_.position[f])) + objects[a] + objects[b];
      mors.push_back({name, a, b});
    }
    std::vector<MorId> identities;
    for (ObjId a = 0; a < layout_.n; ++a) identities.push_back(layout_.identity(a));
    return FinCategory::trusted("U", std::move(objects), std::move(mors), std::move(identities),
                                table_);
  }

  const Matrix& homs_;
  Layout layout_;
  std::size_t limit_;
  std::mt19937_64* rng_;
  std::vector<MorId> table_;
  std::vector<std::pair<MorId, MorId>> unknowns_;
  std::vector<FinCategory> found_;
  std::size_t budget_ = 0;
  std::size_t nodes_ = 0;
};

Matrix hom_matrix(const FinCategory& c) {
  Matrix h(c.num_objects(), std::vector<std::size_t>(c.num_objects()));
  for (ObjId a = 0; a < c.num_objects(); ++a) {
    for (ObjId b = 0; b < c.num_objects(); ++b) h[a][b] = c.hom(a, b).size();
  }
  return h;
}

bool closed_under_composition(const Matrix& h) {
  const std::size_t n = h.size();
  for (ObjId a = 0; a < n; ++a) {
    for (ObjId b = 0; b < n; ++b) {
      for (ObjId c = 0; c < n; ++c) {
        if (h[a][b] && h[b][c] && !h[a][c]) return false;
      }
    }
  }
  return true;
}

Matrix permuted(const Matrix& h, const std::vector<ObjId>& perm) {
  Matrix out(h.size(), std::vector<std::size_t>(h.size()));
  for (ObjId a = 0; a < h.size(); ++a) {
    for (ObjId b = 0; b < h.size(); ++b) out[perm[a]][perm[b]] = h[a][b];
  }
  return out;
}

FinCategory with_name(const FinCategory& c, std::string name, bool validate) {
  std::vector<std::string> objects;
  std::vector<Morphism> mors;
  std::vector<MorId> identities;
  for (ObjId a = 0; a < c.num_objects(); ++a) {
    objects.push_back(c.object_name(a));
    identities.push_back(c.identity(a));
  }
  const std::size_t m = c.num_morphisms();
  for (MorId f = 0; f < m; ++f) mors.push_back(c.morphism(f));
  std::vector<MorId> table(m * m, npos);
  for (MorId g = 0; g < m; ++g) {
    for (MorId f = 0; f < m; ++f) {
      if (c.composable(g, f)) table[g * m + f] = c.compose(g, f);
    }
  }
  if (validate) {
    return FinCategory::from_tables(std::move(name), std::move(objects), std::move(mors),
                                    std::move(identities), std::move(table));
  }
  return FinCategory::trusted(std::move(name), std::move(objects), std::move(mors),
                              std::move(identities), std::move(table));
}

}  // namespace

std::vector<FinCategory> categories_with_homs(const Matrix& homs, std::size_t limit) {
  return TableSearch(homs, limit, nullptr).run();
}

std::vector<std::uint32_t> canonical_form(const FinCategory& c) {
  const std::size_t n = c.num_objects();
  const std::size_t m = c.num_morphisms();
  const Matrix h = hom_matrix(c);
  std::vector<ObjId> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::uint32_t> best;
  // Hom-sets whose two elements may be swapped (no identity among them).
  std::vector<std::pair<ObjId, ObjId>> swappable;
  for (ObjId a = 0; a < n; ++a) {
    for (ObjId b = 0; b < n; ++b) {
      if (a != b && h[a][b] == 2) swappable.emplace_back(a, b);
    }
  }
  do {
    const Matrix ph = permuted(h, perm);
    const Layout layout(ph);
    for (std::size_t mask = 0; mask < (std::size_t{1} << swappable.size()); ++mask) {
      std::vector<MorId> relabel(m);
      for (ObjId a = 0; a < n; ++a) {
        for (ObjId b = 0; b < n; ++b) {
          const auto& hom = c.hom(a, b);
          // Identity first inside endo hom-sets.
          std::vector<MorId> order(hom.begin(), hom.end());
          if (a == b) {
            std::stable_partition(order.begin(), order.end(),
                                  [&](MorId f) { return c.is_identity(f); });
          }
          auto it = std::find(swappable.begin(), swappable.end(), std::make_pair(a, b));
          if (it != swappable.end() && (mask >> (it - swappable.begin())) & 1) {
            std::swap(order[0], order[1]);
          }
          for (std::size_t k = 0; k < order.size(); ++k) {
            relabel[order[k]] = layout.offset[perm[a]][perm[b]] + k;
          }
        }
      }
      std::vector<std::uint32_t> form{static_cast<std::uint32_t>(n)};
      for (const auto& row : ph) {
        for (std::size_t v : row) form.push_back(static_cast<std::uint32_t>(v));
      }
      std::vector<MorId> inverse(m);
      for (MorId f = 0; f < m; ++f) inverse[relabel[f]] = f;
      for (MorId g2 = 0; g2 < m; ++g2) {
        for (MorId f2 = 0; f2 < m; ++f2) {
          const MorId g = inverse[g2];
          const MorId f = inverse[f2];
          if (c.composable(g, f)) form.push_back(static_cast<std::uint32_t>(relabel[c.compose(g, f)]));
        }
      }
      if (best.empty() || form < best) best = std::move(form);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  if (best.empty()) best.push_back(0);
  return best;
}

std::vector<CategoryRef> enumerate_categories(const UniverseBounds& bounds) {
  std::vector<CategoryRef> out;
  const std::size_t p = bounds.max_parallel;
  for (std::size_t n = 0; n <= bounds.max_objects; ++n) {
    std::set<Matrix> matrices;
    std::vector<std::size_t> cells(n * n, 0);
    std::vector<ObjId> perm(n);
    while (true) {
      Matrix h(n, std::vector<std::size_t>(n));
      bool ok = true;
      for (ObjId a = 0; a < n; ++a) {
        for (ObjId b = 0; b < n; ++b) {
          h[a][b] = cells[a * n + b];
          if (a == b && h[a][b] == 0) ok = false;
        }
      }
      if (ok && closed_under_composition(h)) {
        Matrix least = h;
        std::iota(perm.begin(), perm.end(), 0);
        do {
          least = std::min(least, permuted(h, perm));
        } while (std::next_permutation(perm.begin(), perm.end()));
        matrices.insert(least);
      }
      std::size_t k = 0;
      while (k < cells.size() && ++cells[k] > p) cells[k++] = 0;
      if (k == cells.size()) break;
    }
    std::map<std::vector<std::uint32_t>, FinCategory> classes;
    for (const auto& h : matrices) {
      for (auto& c : categories_with_homs(h)) {
        auto form = canonical_form(c);
        classes.try_emplace(std::move(form), std::move(c));
      }
    }
    std::size_t k = 0;
    for (auto& [form, c] : classes) {
      out.push_back(share(with_name(c, "U" + std::to_string(n) + "_" + std::to_string(k++),
                                    false)));
    }
  }
  return out;
}

void for_each_universe_functor(const std::vector<CategoryRef>& universe,
                               const std::function<void(const FinFunctor&)>& visit) {
  for (const auto& c : universe) {
    for (const auto& d : universe) {
      for_each_functor(c, d, [&](const FinFunctor& f) {
        visit(f);
        return true;
      });
    }
  }
}

SweepStats sweep_universe(const std::vector<CategoryRef>& universe, const SweepOptions& options,
                          const std::function<void(const FinFunctor&)>& visit) {
  std::vector<std::pair<std::size_t, std::size_t>> full;
  std::vector<std::pair<std::size_t, std::size_t>> rest;
  for (std::size_t i = 0; i < universe.size(); ++i) {
    for (std::size_t j = 0; j < universe.size(); ++j) {
      const auto size = universe[i]->num_objects() * universe[j]->num_objects();
      (size <= options.exhaustive_max_product ? full : rest).emplace_back(i, j);
    }
  }
  // Samples are drawn up front so that the visited set is fixed by the seed.
  std::vector<FinFunctor> samples;
  std::mt19937_64 rng(options.seed);
  for (std::size_t attempts = 0; !rest.empty() && samples.size() < options.samples &&
                                 attempts < 100 * options.samples;
       ++attempts) {
    const auto [i, j] = rest[rng() % rest.size()];
    if (auto f = random_functor(rng, universe[i], universe[j])) samples.push_back(std::move(*f));
  }

  std::size_t threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::max<std::size_t>(1, threads);
  std::atomic<std::size_t> next_pair{0}, next_sample{0}, visited{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    std::size_t local = 0;
    try {
    for (std::size_t k; (k = next_pair++) < full.size();) {
      for_each_functor(universe[full[k].first], universe[full[k].second],
                       [&](const FinFunctor& f) {
                         visit(f);
                         ++local;
                         return true;
                       });
    }
    for (std::size_t k; (k = next_sample++) < samples.size();) visit(samples[k]);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next_pair = full.size();
      next_sample = samples.size();
    }
    visited += local;
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  SweepStats stats;
  stats.exhaustive = visited;
  stats.sampled = samples.size();
  stats.pairs_exhaustive = full.size();
  stats.pairs_sampled = rest.size();
  return stats;
}

CategoryRef random_category(std::mt19937_64& rng, std::size_t objects, std::size_t max_parallel) {
  std::uniform_int_distribution<std::size_t> size(0, max_parallel);
  std::uniform_int_distribution<std::size_t> endo(1, max_parallel);
  for (std::size_t attempt = 0;; ++attempt) {
    Matrix h(objects, std::vector<std::size_t>(objects));
    for (ObjId a = 0; a < objects; ++a) {
      for (ObjId b = 0; b < objects; ++b) h[a][b] = a == b ? endo(rng) : size(rng);
    }
    // Transitive closure of nonempty homs keeps the matrix composable.
    for (ObjId k = 0; k < objects; ++k) {
      for (ObjId a = 0; a < objects; ++a) {
        for (ObjId b = 0; b < objects; ++b) {
          if (h[a][k] && h[k][b] && !h[a][b]) h[a][b] = 1;
        }
      }
    }
    TableSearch search(h, 1, &rng);
    search.set_budget(20000);
    auto found = search.run();
    if (!found.empty()) {
      return share(with_name(found.front(), "R" + std::to_string(objects), true));
    }
    if (attempt > 100000) throw InvariantViolation("random category search does not terminate");
  }
}

std::optional<FinFunctor> random_functor(std::mt19937_64& rng, const CategoryRef& c,
                                         const CategoryRef& d) {
  // Reservoir sampling over the lexicographic enumeration.
  std::optional<FinFunctor> chosen;
  std::size_t seen = 0;
  for_each_functor(c, d, [&](const FinFunctor& f) {
    ++seen;
    if (std::uniform_int_distribution<std::size_t>(1, seen)(rng) == 1) chosen = f;
    return true;
  });
  return chosen;
}

}  // namespace toposfactor
