#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "cutproj/intlat.hpp"
#include "cutproj/scheme.hpp"

namespace cutproj {

struct FlagGraph {
  int nodes = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<int> component;  // component id per class, numbered by first appearance
  int num_components = 0;
};

FlagGraph flag_graph(const InternalSystem& s);

struct Factor {
  std::vector<int> classes;     // P_i
  std::vector<int> co_classes;  // A_i, the other classes
  FieldMat basis;               // basis vectors of X_i (each of length n)
  std::vector<HalfSpace> window;  // W_i in basis coordinates
  Subgroup lattice;             // Gamma_i in Z^k
  int k = 0, n = 0, d = 0;
  Rat delta;
  bool constant_rank = false;
  int rank = -1;                // common stabiliser rank inside the subsystem, when constant
};

struct Decomposition {
  std::vector<Factor> parts;
  std::optional<Int> index_N;  // nullopt: infinite
  bool indecomposable = false;
};

// Factors are the connected components of the flag graph. Throws std::logic_error
// (INCONSISTENT_DECOMP) if the resulting subspaces are not complementary.
Decomposition decompose(const InternalSystem& s);

struct Subsystem {
  int id = 0;
  InternalSystem sys;
  Subgroup lattice;  // Gamma_i; row j of its HNF basis is coordinate e_j of the subsystem
  FieldMat basis;    // X_i basis
  Rat delta;
  Int N = 1;         // index of the sum of factor lattices
};

// Throws std::domain_error (INFINITE_INDEX) when the index is infinite.
Subsystem subsystem(const InternalSystem& s, const Decomposition& dec, int i);

// Minkowski sum of the factor vertex sets equals the vertex set of W (exact).
bool minkowski_vertices_match(const InternalSystem& s, const Decomposition& dec);

// Independent oracle: all copartitions by brute force; returns the class blocks of the
// finest valid decomposition (blocks sorted), or nullopt if the finest one is not unique.
std::optional<std::vector<std::vector<int>>> finest_decomposition_bruteforce(const InternalSystem& s);
bool verify_decomposition_bruteforce(const InternalSystem& s);

struct VertexGroup {
  int rank = 0;
  std::optional<Int> index_over_lattice;  // [V : Gamma_<]
  std::optional<Int> M;                   // least M with M V inside Gamma_<
};
// Flag given as n class ids. Throws std::domain_error (NOT_WEAKLY_HOMOGENEOUS) if !w.yes.
VertexGroup vertex_group(const InternalSystem& s, const std::vector<int>& flag, const WeakHomogeneity& w);

}  // namespace cutproj
