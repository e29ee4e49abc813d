#include "phasetopo/homology.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "phasetopo/error.hpp"
#include "phasetopo/text_io.hpp"

namespace phasetopo {

bool pair_less(const PersistencePair& a, const PersistencePair& b) {
  if (a.dim != b.dim) return a.dim < b.dim;
  if (a.birth != b.birth) return a.birth < b.birth;
  if (a.essential() != b.essential()) return b.essential();
  if (a.essential()) return false;
  return *a.death < *b.death;
}

PersistenceDiagram PersistenceDiagram::dimension(int dim) const {
  PersistenceDiagram out;
  out.eps_max = eps_max;
  for (const auto& p : pairs) {
    if (p.dim == dim) out.pairs.push_back(p);
  }
  return out;
}

PersistenceDiagram PersistenceDiagram::without_zero_persistence() const {
  PersistenceDiagram out;
  out.eps_max = eps_max;
  for (const auto& p : pairs) {
    if (!p.zero_persistence()) out.pairs.push_back(p);
  }
  return out;
}

PersistenceDiagram PersistenceDiagram::finitized() const {
  PersistenceDiagram out = *this;
  for (auto& p : out.pairs) {
    if (p.essential()) p.death = std::max(eps_max, p.birth);
  }
  return out;
}

void PersistenceDiagram::canonicalize() { std::sort(pairs.begin(), pairs.end(), pair_less); }

std::size_t PersistenceDiagram::count(int dim) const {
  return static_cast<std::size_t>(
      std::count_if(pairs.begin(), pairs.end(), [dim](const PersistencePair& p) { return p.dim == dim; }));
}

namespace {

using Column = std::vector<std::uint32_t>;
constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

// Symmetric difference of two sorted columns.
void add_column(Column& target, const Column& source, Column& scratch) {
  scratch.clear();
  std::set_symmetric_difference(target.begin(), target.end(), source.begin(), source.end(),
                                std::back_inserter(scratch));
  target.swap(scratch);
}

[[noreturn]] void malformed(std::size_t position, const std::string& what) {
  throw Error(ErrorCode::MalformedFiltration, "simplex #" + std::to_string(position) + ": " + what);
}

// Filtration positions of every vertex, edge and triangle, keyed by vertex tuple.
class SimplexIndex {
 public:
  explicit SimplexIndex(const Filtration& f) : n_(f.n_vertices), vertex_(n_, kNone), edge_(n_ * n_, kNone) {
    const std::size_t cube = n_ * n_ * n_;
    dense_triangles_ = cube <= (std::size_t{1} << 24);
    if (dense_triangles_) triangle_dense_.assign(cube, kNone);

    for (std::size_t pos = 0; pos < f.simplices.size(); ++pos) {
      const Simplex& s = f.simplices[pos];
      if (s.dim > 2) malformed(pos, "dimension above 2");
      if (!(s.value >= 0.0)) malformed(pos, "negative or NaN value");
      if (pos > 0 && filtration_less(s, f.simplices[pos - 1])) malformed(pos, "out of filtration order");
      for (std::size_t k = 0; k <= s.dim; ++k) {
        if (s.vertices[k] >= n_) malformed(pos, "vertex index out of range");
        if (k > 0 && s.vertices[k - 1] >= s.vertices[k]) malformed(pos, "vertices not strictly increasing");
      }
      const auto face = [&](std::uint32_t face_pos) {
        if (face_pos == kNone) malformed(pos, "face missing or listed after its coface");
        if (f.simplices[face_pos].value > s.value) malformed(pos, "value below a face value");
      };
      const auto& v = s.vertices;
      const auto p32 = static_cast<std::uint32_t>(pos);
      switch (s.dim) {
        case 0:
          if (vertex_[v[0]] != kNone) malformed(pos, "duplicate vertex");
          vertex_[v[0]] = p32;
          break;
        case 1:
          face(vertex(v[0]));
          face(vertex(v[1]));
          if (edge(v[0], v[1]) != kNone) malformed(pos, "duplicate edge");
          edge_[v[0] * n_ + v[1]] = p32;
          edges_.push_back(p32);
          break;
        case 2:
          face(edge(v[0], v[1]));
          face(edge(v[0], v[2]));
          face(edge(v[1], v[2]));
          if (triangle(v[0], v[1], v[2]) != kNone) malformed(pos, "duplicate triangle");
          set_triangle(v[0], v[1], v[2], p32);
          triangles_.push_back(p32);
          break;
      }
    }
  }

  std::uint32_t vertex(std::size_t a) const { return vertex_[a]; }
  std::uint32_t edge(std::size_t a, std::size_t b) const { return edge_[a * n_ + b]; }
  std::uint32_t triangle(std::size_t a, std::size_t b, std::size_t c) const {
    const std::size_t key = (a * n_ + b) * n_ + c;
    if (dense_triangles_) return triangle_dense_[key];
    const auto it = triangle_sparse_.find(key);
    return it == triangle_sparse_.end() ? kNone : it->second;
  }
  const std::vector<std::uint32_t>& edges() const { return edges_; }
  const std::vector<std::uint32_t>& triangles() const { return triangles_; }
  std::size_t n() const { return n_; }

 private:
  void set_triangle(std::size_t a, std::size_t b, std::size_t c, std::uint32_t pos) {
    const std::size_t key = (a * n_ + b) * n_ + c;
    if (dense_triangles_) {
      triangle_dense_[key] = pos;
    } else {
      triangle_sparse_.emplace(key, pos);
    }
  }

  std::size_t n_;
  std::vector<std::uint32_t> vertex_;
  std::vector<std::uint32_t> edge_;
  bool dense_triangles_ = true;
  std::vector<std::uint32_t> triangle_dense_;
  std::unordered_map<std::size_t, std::uint32_t> triangle_sparse_;
  std::vector<std::uint32_t> edges_;
  std::vector<std::uint32_t> triangles_;
};

// H1 by left-to-right reduction of triangle columns. Returns the set of edges killed.
void reduce_triangles(const Filtration& f, const SimplexIndex& index, const std::vector<char>& edge_negative,
                      PersistenceDiagram& diagram, std::vector<char>& edge_killed) {
  const auto& edges = index.edges();
  const std::uint32_t last_edge = edges.empty() ? 0 : edges.back();
  std::size_t open_cycles = 0;
  std::size_t edges_seen = 0;
  std::unordered_map<std::uint32_t, Column> reduced;  // pivot edge -> reduced triangle column
  Column col, scratch;

  for (std::uint32_t pos : index.triangles()) {
    // Creators among edges that precede this triangle.
    for (; edges_seen < edges.size() && edges[edges_seen] < pos; ++edges_seen) {
      if (!edge_negative[edges[edges_seen]]) ++open_cycles;
    }
    // Once every edge is in and no cycle is open, every later column reduces to zero.
    if (open_cycles == 0 && (edges.empty() || pos > last_edge)) break;

    const auto& v = f.simplices[pos].vertices;
    col = {index.edge(v[0], v[1]), index.edge(v[0], v[2]), index.edge(v[1], v[2])};
    std::sort(col.begin(), col.end());
    while (!col.empty()) {
      const auto it = reduced.find(col.back());
      if (it == reduced.end()) break;
      add_column(col, it->second, scratch);
    }
    if (col.empty()) continue;
    const std::uint32_t low = col.back();
    edge_killed[low] = 1;
    diagram.pairs.push_back({1, f.simplices[low].value, f.simplices[pos].value});
    reduced.emplace(low, col);
    --open_cycles;
  }
}

// H1 by reducing edge coboundaries in reverse filtration order; the pivot is the earliest
// coface. H0-killing edges have a zero reduced coboundary and are skipped. Reduced
// columns fill in badly, so only the set of edges summed into each one is stored and
// the working column is rebuilt from their coboundaries in a dense bit vector. Each
// addition cancels the current pivot and adds only later cofaces, so the pivot search
// resumes where it left off.
void reduce_coboundaries(const Filtration& f, const SimplexIndex& index, const std::vector<char>& edge_negative,
                         PersistenceDiagram& diagram, std::vector<char>& edge_killed) {
  const std::size_t n = index.n();
  std::unordered_map<std::uint32_t, Column> combination;  // pivot triangle -> edges summed
  std::vector<std::uint64_t> work((f.simplices.size() + 63) / 64, 0);
  std::vector<std::size_t> touched;

  const auto add_coboundary = [&](std::uint32_t edge_pos) {
    const auto& v = f.simplices[edge_pos].vertices;
    const std::size_t a = v[0];
    const std::size_t b = v[1];
    for (std::size_t c = 0; c < n; ++c) {
      if (c == a || c == b) continue;
      const std::uint32_t t = c < a ? index.triangle(c, a, b) : c < b ? index.triangle(a, c, b) : index.triangle(a, b, c);
      if (t == kNone) continue;
      work[t >> 6] ^= std::uint64_t{1} << (t & 63);
      touched.push_back(t >> 6);
    }
  };
  const auto pivot_from = [&](std::size_t word) -> std::uint32_t {
    for (; word < work.size(); ++word) {
      if (work[word] != 0) return static_cast<std::uint32_t>(word * 64 + std::countr_zero(work[word]));
    }
    return kNone;
  };

  Column summed;
  const auto& edges = index.edges();
  for (auto it = edges.rbegin(); it != edges.rend(); ++it) {
    const std::uint32_t pos = *it;
    if (edge_negative[pos]) continue;
    summed.assign(1, pos);
    add_coboundary(pos);
    std::uint32_t low = pivot_from(0);
    while (low != kNone) {
      const auto found = combination.find(low);
      if (found == combination.end()) break;
      for (std::uint32_t e : found->second) {
        summed.push_back(e);
        add_coboundary(e);
      }
      low = pivot_from(low >> 6);
    }
    for (std::size_t w : touched) work[w] = 0;
    touched.clear();
    if (low == kNone) continue;

    // Keep edges that occur an odd number of times.
    std::sort(summed.begin(), summed.end());
    Column odd;
    for (std::size_t i = 0; i < summed.size();) {
      std::size_t j = i;
      while (j < summed.size() && summed[j] == summed[i]) ++j;
      if ((j - i) % 2 == 1) odd.push_back(summed[i]);
      i = j;
    }
    edge_killed[pos] = 1;
    diagram.pairs.push_back({1, f.simplices[pos].value, f.simplices[low].value});
    combination.emplace(low, std::move(odd));
  }
}

}  // namespace

PersistenceDiagram compute_persistence(const Filtration& f, Reduction strategy) {
  const std::size_t total = f.simplices.size();
  if (total >= kNone) throw Error(ErrorCode::InvalidArgument, "filtration too large");
  const SimplexIndex index(f);

  PersistenceDiagram diagram;
  diagram.eps_max = f.eps_max;

  // H0: edge columns left to right; a nonzero reduced column kills its pivot vertex.
  std::vector<char> vertex_killed(total, 0);
  std::vector<char> edge_negative(total, 0);
  {
    std::unordered_map<std::uint32_t, Column> reduced;  // pivot vertex -> reduced edge column
    Column col, scratch;
    for (std::uint32_t pos : index.edges()) {
      const auto& v = f.simplices[pos].vertices;
      col = {index.vertex(v[0]), index.vertex(v[1])};
      std::sort(col.begin(), col.end());
      while (!col.empty()) {
        const auto it = reduced.find(col.back());
        if (it == reduced.end()) break;
        add_column(col, it->second, scratch);
      }
      if (col.empty()) continue;
      const std::uint32_t low = col.back();
      vertex_killed[low] = 1;
      edge_negative[pos] = 1;
      diagram.pairs.push_back({0, f.simplices[low].value, f.simplices[pos].value});
      reduced.emplace(low, col);
    }
  }

  std::vector<char> edge_killed(total, 0);
  if (strategy == Reduction::Boundary) {
    reduce_triangles(f, index, edge_negative, diagram, edge_killed);
  } else {
    reduce_coboundaries(f, index, edge_negative, diagram, edge_killed);
  }

  for (std::size_t a = 0; a < index.n(); ++a) {
    const std::uint32_t pos = index.vertex(a);
    if (pos != kNone && !vertex_killed[pos]) diagram.pairs.push_back({0, f.simplices[pos].value, std::nullopt});
  }
  for (std::uint32_t pos : index.edges()) {
    if (!edge_negative[pos] && !edge_killed[pos]) diagram.pairs.push_back({1, f.simplices[pos].value, std::nullopt});
  }

  diagram.canonicalize();
  return diagram;
}

namespace {

// Dense GF(2) vector as 64-bit words.
using BitVector = std::vector<std::uint64_t>;

// Incremental row-echelon basis: each stored vector has a distinct leading bit.
class Gf2Basis {
 public:
  explicit Gf2Basis(std::size_t bits) : words_((bits + 63) / 64), by_lead_(bits) {}

  // Returns true if the vector was independent of the current span.
  bool insert(BitVector v) {
    for (std::size_t w = words_; w-- > 0;) {
      while (v[w] != 0) {
        const std::size_t bit = w * 64 + (63 - static_cast<std::size_t>(__builtin_clzll(v[w])));
        auto& slot = by_lead_[bit];
        if (slot.empty()) {
          slot = std::move(v);
          ++rank_;
          return true;
        }
        for (std::size_t k = 0; k <= w; ++k) v[k] ^= slot[k];
      }
    }
    return false;
  }

  std::size_t rank() const noexcept { return rank_; }

 private:
  std::size_t words_;
  std::vector<BitVector> by_lead_;
  std::size_t rank_ = 0;
};

BitVector unit_vector(std::size_t bits, std::initializer_list<std::size_t> ones) {
  BitVector v((bits + 63) / 64, 0);
  for (std::size_t i : ones) v[i / 64] ^= std::uint64_t{1} << (i % 64);
  return v;
}

// Null space of a GF(2) matrix given by its columns (each a BitVector over `rows` bits).
// Returns basis vectors over the column index space.
std::vector<BitVector> kernel_basis(const std::vector<BitVector>& columns, std::size_t rows) {
  const std::size_t cols = columns.size();
  const std::size_t row_words = (rows + 63) / 64;
  const std::size_t col_words = (cols + 63) / 64;
  // Augmented column records: image and the combination of original columns producing it.
  struct Record {
    BitVector image;
    BitVector combo;
  };
  std::vector<Record> pivots(rows);
  std::vector<bool> has_pivot(rows, false);
  std::vector<BitVector> kernel;
  for (std::size_t c = 0; c < cols; ++c) {
    Record r{columns[c], BitVector(col_words, 0)};
    r.combo[c / 64] ^= std::uint64_t{1} << (c % 64);
    bool reduced_to_zero = true;
    for (std::size_t w = row_words; w-- > 0;) {
      while (r.image[w] != 0) {
        const std::size_t bit = w * 64 + (63 - static_cast<std::size_t>(__builtin_clzll(r.image[w])));
        if (!has_pivot[bit]) {
          has_pivot[bit] = true;
          pivots[bit] = r;
          reduced_to_zero = false;
          break;
        }
        for (std::size_t k = 0; k < row_words; ++k) r.image[k] ^= pivots[bit].image[k];
        for (std::size_t k = 0; k < col_words; ++k) r.combo[k] ^= pivots[bit].combo[k];
      }
      if (!reduced_to_zero) break;
    }
    if (reduced_to_zero) kernel.push_back(std::move(r.combo));
  }
  return kernel;
}

}  // namespace

PersistenceDiagram naive_persistence_oracle(const Filtration& f) {
  if (f.n_vertices > kOracleMaxVertices) {
    throw Error(ErrorCode::TooLargeForOracle,
                std::to_string(f.n_vertices) + " vertices exceeds the oracle bound of " +
                    std::to_string(kOracleMaxVertices));
  }

  // Distinct filtration values, ascending. Level s holds every simplex with value <= values[s].
  std::vector<double> values;
  for (const auto& s : f.simplices) values.push_back(s.value);
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  const std::size_t levels = values.size();
  const auto level_of = [&](double v) {
    return static_cast<std::size_t>(std::lower_bound(values.begin(), values.end(), v) - values.begin());
  };

  // Per-dimension simplex lists with their levels; index within dimension is the chain coordinate.
  std::vector<std::vector<Simplex>> by_dim(3);
  for (const auto& s : f.simplices) by_dim.at(s.dim).push_back(s);
  std::map<std::array<VertexId, 3>, std::size_t> index_of[3];
  for (int d = 0; d < 3; ++d) {
    for (std::size_t i = 0; i < by_dim[d].size(); ++i) index_of[d][by_dim[d][i].vertices] = i;
  }

  const auto boundary_vector = [&](const Simplex& s) {
    const std::size_t bits = by_dim[s.dim - 1].size();
    const auto lookup = [&](std::array<VertexId, 3> face) {
      const auto it = index_of[s.dim - 1].find(face);
      if (it == index_of[s.dim - 1].end()) {
        throw Error(ErrorCode::MalformedFiltration, "face missing from filtration");
      }
      return it->second;
    };
    const auto& v = s.vertices;
    if (s.dim == 1) return unit_vector(bits, {lookup({v[0], 0, 0}), lookup({v[1], 0, 0})});
    return unit_vector(bits, {lookup({v[0], v[1], 0}), lookup({v[0], v[2], 0}), lookup({v[1], v[2], 0})});
  };

  PersistenceDiagram diagram;
  diagram.eps_max = f.eps_max;

  for (int p = 0; p <= 1; ++p) {
    const auto& chains = by_dim[p];
    const auto& cofaces = by_dim[p + 1];
    const std::size_t chain_bits = chains.size();

    // beta[s][t] = rank of H_p(K_s) -> H_p(K_t) = dim Z_s - dim(Z_s ∩ B_t)
    //            = dim(Z_s + B_t) - dim B_t.
    std::vector<std::vector<long>> beta(levels, std::vector<long>(levels, 0));
    std::vector<long> cycle_dim(levels, 0);

    // dim B_t for every t.
    std::vector<long> boundary_dim(levels, 0);
    {
      Gf2Basis basis(chain_bits);
      std::size_t next = 0;
      for (std::size_t t = 0; t < levels; ++t) {
        for (; next < cofaces.size() && level_of(cofaces[next].value) <= t; ++next) {
          basis.insert(boundary_vector(cofaces[next]));
        }
        boundary_dim[t] = static_cast<long>(basis.rank());
      }
    }

    for (std::size_t s = 0; s < levels; ++s) {
      // Cycle space of the p-chains present at level s.
      std::vector<std::size_t> present;
      for (std::size_t i = 0; i < chains.size(); ++i) {
        if (level_of(chains[i].value) <= s) present.push_back(i);
      }
      std::vector<BitVector> cycles;
      if (p == 0) {
        for (std::size_t i : present) cycles.push_back(unit_vector(chain_bits, {i}));
      } else {
        std::vector<BitVector> columns;
        for (std::size_t i : present) columns.push_back(boundary_vector(chains[i]));
        for (const auto& combo : kernel_basis(columns, by_dim[p - 1].size())) {
          BitVector cycle((chain_bits + 63) / 64, 0);
          for (std::size_t c = 0; c < present.size(); ++c) {
            if ((combo[c / 64] >> (c % 64)) & 1U) cycle[present[c] / 64] ^= std::uint64_t{1} << (present[c] % 64);
          }
          cycles.push_back(std::move(cycle));
        }
      }
      cycle_dim[s] = static_cast<long>(cycles.size());

      Gf2Basis basis(chain_bits);
      for (auto& c : cycles) basis.insert(c);
      std::size_t next = 0;
      for (std::size_t t = s; t < levels; ++t) {
        for (; next < cofaces.size() && level_of(cofaces[next].value) <= t; ++next) {
          basis.insert(boundary_vector(cofaces[next]));
        }
        beta[s][t] = static_cast<long>(basis.rank()) - boundary_dim[t];
      }
    }

    const auto b = [&](std::ptrdiff_t s, std::ptrdiff_t t) -> long {
      if (s < 0) return 0;
      return beta[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)];
    };
    const auto emit = [&](double birth, std::optional<double> death, long multiplicity) {
      if (multiplicity < 0) throw Error(ErrorCode::MalformedFiltration, "negative pair multiplicity");
      for (long k = 0; k < multiplicity; ++k) diagram.pairs.push_back({p, birth, death});
    };

    const auto last = static_cast<std::ptrdiff_t>(levels) - 1;
    for (std::ptrdiff_t s = 0; s <= last; ++s) {
      // Classes born at s that die at s: new cycles minus classes born at s surviving in K_s.
      const long new_cycles = cycle_dim[s] - (s > 0 ? cycle_dim[s - 1] : 0);
      const long survive = b(s, s) - b(s - 1, s);
      emit(values[s], values[s], new_cycles - survive);
      for (std::ptrdiff_t t = s + 1; t <= last; ++t) {
        emit(values[s], values[t], b(s, t - 1) - b(s, t) - b(s - 1, t - 1) + b(s - 1, t));
      }
      emit(values[s], std::nullopt, b(s, last) - b(s - 1, last));
    }
  }

  diagram.canonicalize();
  return diagram;
}

std::size_t persistent_betti(const PersistenceDiagram& d, int dim, double threshold) {
  return static_cast<std::size_t>(std::count_if(d.pairs.begin(), d.pairs.end(), [&](const PersistencePair& p) {
    return p.dim == dim && p.persistence(d.eps_max) > threshold;
  }));
}

void write_diagram(std::ostream& out, const PersistenceDiagram& d, const DiagramFileHeader& header,
                   bool keep_zero_persistence) {
  out << "# phasetopo persistence diagram\n";
  if (!header.fingerprint.empty()) out << "# fingerprint " << header.fingerprint << '\n';
  if (!header.channel.empty()) out << "# channel " << header.channel << '\n';
  if (header.seed) out << "# seed " << *header.seed << '\n';
  out << "eps_max " << format_double(d.eps_max) << '\n';
  PersistenceDiagram sorted = keep_zero_persistence ? d : d.without_zero_persistence();
  sorted.canonicalize();
  for (const auto& p : sorted.pairs) {
    out << p.dim << ' ' << format_double(p.birth) << ' ' << (p.death ? format_double(*p.death) : "inf") << '\n';
  }
}

std::string format_diagram(const PersistenceDiagram& d, const DiagramFileHeader& header, bool keep_zero_persistence) {
  std::ostringstream out;
  write_diagram(out, d, header, keep_zero_persistence);
  return out.str();
}

PersistenceDiagram parse_diagram(const std::string& text) {
  PersistenceDiagram d;
  bool have_eps = false;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  const auto fail = [&](const std::string& what) -> PersistenceDiagram {
    throw Error(ErrorCode::ParseError, "diagram line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto tokens = split_whitespace(body);
    if (tokens[0] == "eps_max") {
      if (tokens.size() != 2) return fail("expected 'eps_max <value>'");
      const auto v = parse_double(tokens[1]);
      if (!v || !(*v >= 0.0)) return fail("bad eps_max value");
      d.eps_max = *v;
      have_eps = true;
      continue;
    }
    if (tokens.size() != 3) return fail("expected 'dim birth death'");
    const auto dim = parse_integer(tokens[0]);
    const auto birth = parse_double(tokens[1]);
    if (!dim || (*dim != 0 && *dim != 1)) return fail("dimension must be 0 or 1");
    if (!birth) return fail("bad birth value");
    PersistencePair p{static_cast<int>(*dim), *birth, std::nullopt};
    if (tokens[2] != "inf") {
      const auto death = parse_double(tokens[2]);
      if (!death) return fail("bad death value");
      if (*death < *birth) return fail("death precedes birth");
      p.death = *death;
    }
    d.pairs.push_back(p);
  }
  if (!have_eps) {
    line_no = 0;
    return fail("missing eps_max record");
  }
  d.canonicalize();
  return d;
}

PersistenceDiagram read_diagram_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingFile, "cannot open diagram file " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_diagram(buffer.str());
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

}  // namespace phasetopo
