#include "eigenchaos/partitions.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "eigenchaos/matrix.hpp"  // write_text_atomic

namespace eigenchaos {

namespace {

std::string pos_str(int i, int j) {
  return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

bool mirror_closed(const Block& b) {
  std::set<std::pair<int, int>> s(b.positions.begin(), b.positions.end());
  if (s.size() != b.positions.size()) return false;  // duplicates
  for (auto [i, j] : s) {
    if (!s.count({j, i})) return false;
  }
  return true;
}

}  // namespace

int nu(const Block& b) {
  if (!mirror_closed(b)) {
    throw ValidationError("block is not symmetric: some (i,j) lacks its mirror (j,i)");
  }
  int diag = 0;
  for (auto [i, j] : b.positions) {
    if (i == j) ++diag;
  }
  return static_cast<int>(b.positions.size()) + diag;
}

std::optional<PartitionViolation> validate_partition(const AdmissiblePartition& p) {
  int n = p.n;
  if (n < 1) return PartitionViolation{"coverage", "dimension n must be >= 1"};

  for (std::size_t a = 0; a < p.blocks.size(); ++a) {
    const Block& b = p.blocks[a];
    std::set<std::pair<int, int>> s(b.positions.begin(), b.positions.end());
    for (auto [i, j] : s) {
      if (i < 1 || i > n || j < 1 || j > n) {
        return PartitionViolation{"coverage", "block " + std::to_string(a + 1) + " position " +
                                                  pos_str(i, j) + " outside [1," +
                                                  std::to_string(n) + "]^2"};
      }
      if (!s.count({j, i})) {
        return PartitionViolation{"symmetry", "block " + std::to_string(a + 1) + " contains " +
                                                  pos_str(i, j) + " but not " + pos_str(j, i)};
      }
    }
    if (s.size() != b.positions.size()) {
      return PartitionViolation{"disjointness",
                                "block " + std::to_string(a + 1) + " lists a position twice"};
    }
    if (b.positions.empty()) {
      return PartitionViolation{"equal-nu", "block " + std::to_string(a + 1) + " is empty"};
    }
  }

  // Ownership scan drives both coverage and disjointness.
  std::vector<int> count(static_cast<std::size_t>(n) * n, 0);
  for (const Block& b : p.blocks) {
    for (auto [i, j] : b.positions) count[static_cast<std::size_t>(i - 1) * n + (j - 1)]++;
  }
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      if (count[static_cast<std::size_t>(i - 1) * n + (j - 1)] == 0) {
        return PartitionViolation{"coverage", "position " + pos_str(i, j) + " is uncovered"};
      }
    }
  }
  for (std::size_t a = 0; a < p.blocks.size(); ++a) {
    for (auto [i, j] : p.blocks[a].positions) {
      if (count[static_cast<std::size_t>(i - 1) * n + (j - 1)] > 1) {
        return PartitionViolation{"disjointness", "position " + pos_str(i, j) +
                                                      " belongs to more than one block"};
      }
    }
  }

  int nu0 = nu(p.blocks.front());
  for (std::size_t a = 1; a < p.blocks.size(); ++a) {
    int nua = nu(p.blocks[a]);
    if (nua != nu0) {
      return PartitionViolation{"equal-nu", "block " + std::to_string(a + 1) + " has nu=" +
                                                std::to_string(nua) + " but block 1 has nu=" +
                                                std::to_string(nu0)};
    }
  }
  return std::nullopt;
}

void AdmissiblePartition::finalize() {
  if (auto v = validate_partition(*this)) {
    throw CheckFailure("invalid partition [" + v->condition + "]: " + v->message);
  }
  nu = eigenchaos::nu(blocks.front());
  owner_.assign(static_cast<std::size_t>(n) * n, -1);
  reps_.assign(blocks.size(), {});
  for (std::size_t a = 0; a < blocks.size(); ++a) {
    for (auto [i, j] : blocks[a].positions) {
      owner_[static_cast<std::size_t>(i - 1) * n + (j - 1)] = static_cast<int>(a);
      if (i <= j) reps_[a].emplace_back(i - 1, j - 1);
    }
    std::sort(reps_[a].begin(), reps_[a].end());
  }
  finalized_ = true;
}

AdmissiblePartition entries_partition(int n) {
  if (n < 1) throw ValidationError("entries_partition: n must be >= 1");
  AdmissiblePartition p;
  p.n = n;
  p.blocks.reserve(static_cast<std::size_t>(n) * (n + 1) / 2);
  for (int i = 1; i <= n; ++i) {
    for (int j = i; j <= n; ++j) {
      Block b;
      if (i == j) {
        b.positions = {{i, i}};
      } else {
        b.positions = {{i, j}, {j, i}};
      }
      p.blocks.push_back(std::move(b));
    }
  }
  p.finalize();
  return p;
}

AdmissiblePartition band_partition(int n, int width) {
  if (n < 1) throw ValidationError("band_partition: n must be >= 1");
  if (width < 1) throw ValidationError("band_partition: width must be >= 1");
  if (width == 1) return entries_partition(n);

  // Feasibility for uniform nu = 2*width^2: the index groups must tile [n],
  // and the diagonal-group residue (total size-mass n*(width+1)) must split
  // evenly into nu-sized bundles.
  long long w = width;
  bool feasible = (n % width == 0) && ((static_cast<long long>(n) * (w + 1)) % (2 * w * w) == 0);
  if (!feasible) {
    throw ValidationError("infeasible tiling: no equal-nu band arrangement exists for n=" +
                          std::to_string(n) + ", width=" + std::to_string(width));
  }

  AdmissiblePartition p;
  p.n = n;
  int groups = n / width;

  // Mirrored off-diagonal tiles: group pair (I,J), I<J, gives the w^2
  // positions {(i,j)} plus their mirrors, nu = 2 w^2.
  for (int gi = 0; gi < groups; ++gi) {
    for (int gj = gi + 1; gj < groups; ++gj) {
      Block b;
      for (int i = gi * width + 1; i <= (gi + 1) * width; ++i) {
        for (int j = gj * width + 1; j <= (gj + 1) * width; ++j) {
          b.positions.emplace_back(i, j);
          b.positions.emplace_back(j, i);
        }
      }
      std::sort(b.positions.begin(), b.positions.end());
      p.blocks.push_back(std::move(b));
    }
  }

  // Diagonal-group residue: each group's within-group upper triangle,
  // gathered in group order and repackaged into bundles of w^2 independent
  // entries so every bundle also has nu = 2 w^2.
  std::vector<std::pair<int, int>> diag_reps;
  for (int g = 0; g < groups; ++g) {
    for (int i = g * width + 1; i <= (g + 1) * width; ++i) {
      for (int j = i; j <= (g + 1) * width; ++j) diag_reps.emplace_back(i, j);
    }
  }
  int bundle = width * width;
  for (std::size_t start = 0; start < diag_reps.size(); start += bundle) {
    Block b;
    for (std::size_t t = start; t < start + bundle; ++t) {
      auto [i, j] = diag_reps[t];
      b.positions.emplace_back(i, j);
      if (i != j) b.positions.emplace_back(j, i);
    }
    std::sort(b.positions.begin(), b.positions.end());
    p.blocks.push_back(std::move(b));
  }

  p.finalize();
  return p;
}

UnionSet sample_union(const AdmissiblePartition& p, int k, Rng& rng) {
  int m = p.m();
  if (k < 0 || k > m) {
    throw ValidationError("sample_union: k=" + std::to_string(k) + " outside [0," +
                          std::to_string(m) + "]");
  }
  std::vector<int> ids(m);
  std::iota(ids.begin(), ids.end(), 0);
  // Partial Fisher-Yates: after k steps the prefix is a uniform k-subset.
  for (int t = 0; t < k; ++t) {
    std::uint64_t r = rng.uniform_below(static_cast<std::uint64_t>(m - t));
    std::swap(ids[t], ids[t + static_cast<int>(r)]);
  }
  UnionSet u;
  u.k = k;
  u.block_ids.assign(ids.begin(), ids.begin() + k);
  std::sort(u.block_ids.begin(), u.block_ids.end());
  for (int a : u.block_ids) {
    const auto& pos = p.blocks[a].positions;
    u.indices.insert(u.indices.end(), pos.begin(), pos.end());
  }
  std::sort(u.indices.begin(), u.indices.end());
  return u;
}

void write_partition_text(const std::string& path, const AdmissiblePartition& p) {
  std::ostringstream out;
  out << p.n << " " << p.m() << " " << p.nu << "\n";
  for (const Block& b : p.blocks) {
    bool first = true;
    for (auto [i, j] : b.positions) {
      if (!first) out << ' ';
      out << i << ',' << j;
      first = false;
    }
    out << "\n";
  }
  write_text_atomic(path, out.str());
}

AdmissiblePartition read_partition_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open partition file '" + path + "'");
  std::string header;
  if (!std::getline(in, header)) throw ValidationError("partition file '" + path + "': empty");
  std::istringstream hs(header);
  int n = 0, m = 0, declared_nu = 0;
  if (!(hs >> n >> m >> declared_nu) || n < 1 || m < 1) {
    throw ValidationError("partition file '" + path + "': bad header (expected \"n m nu\")");
  }
  AdmissiblePartition p;
  p.n = n;
  p.blocks.resize(m);
  for (int a = 0; a < m; ++a) {
    std::string line;
    if (!std::getline(in, line)) {
      throw ValidationError("partition file '" + path + "': expected " + std::to_string(m) +
                            " block lines, got " + std::to_string(a));
    }
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      auto comma = tok.find(',');
      if (comma == std::string::npos) {
        throw ValidationError("partition file '" + path + "': bad position token '" + tok + "'");
      }
      int i, j;
      try {
        i = std::stoi(tok.substr(0, comma));
        j = std::stoi(tok.substr(comma + 1));
      } catch (const std::exception&) {
        throw ValidationError("partition file '" + path + "': bad position token '" + tok + "'");
      }
      p.blocks[a].positions.emplace_back(i, j);
    }
    std::sort(p.blocks[a].positions.begin(), p.blocks[a].positions.end());
  }
  std::string rest;
  while (std::getline(in, rest)) {
    if (!rest.empty() && rest.find_first_not_of(" \t\r") != std::string::npos) {
      throw ValidationError("partition file '" + path + "': trailing data");
    }
  }
  p.finalize();  // throws CheckFailure with the violation report if inadmissible
  if (p.nu != declared_nu) {
    throw CheckFailure("invalid partition [equal-nu]: header declares nu=" +
                       std::to_string(declared_nu) + " but blocks have nu=" +
                       std::to_string(p.nu));
  }
  return p;
}

}  // namespace eigenchaos
