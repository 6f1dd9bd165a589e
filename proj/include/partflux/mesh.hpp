// SPDX-License-Identifier: Apache-2.0

#ifndef PARTFLUX_MESH_HPP
#define PARTFLUX_MESH_HPP

#include <array>
#include <utility>
#include <vector>

namespace partflux
{

// Uniform N x N quadrilateral partition of the unit square, split by the vertical
// interface x = 0.5 into a left (1) and a right (2) subdomain.
struct DomainSpec
{
  int n = 64;
  double x_interface = 0.5;

  double h() const { return 1.0 / n; }
};

enum class Region
{
  Left,   // subdomain 1, [0, 0.5] x [0, 1]
  Right,  // subdomain 2, [0.5, 1] x [0, 1]
  Full,   // whole unit square, used by the monolithic benchmark
};

// Subdomain index used by the (-1)^i sign conventions: 1 (left) or 2 (right).
int SideOf(Region region);

struct Node
{
  double x, y;
  int ix, iy;  // lattice indices in the full N x N grid
};

// Structured Q1 mesh of one region. Node storage follows the DoF ordering
// (interface, interior, Dirichlet): node r of the mesh is DoF r, so that the first
// NumFree() entries of a nodal vector are the free coefficients (u_gamma, u_0).
class SubdomainMesh
{
public:
  SubdomainMesh(const DomainSpec &spec, Region region);

  Region region() const { return region_; }
  int side() const { return SideOf(region_); }
  int n() const { return n_; }
  double h() const { return h_; }

  int NumNodes() const { return static_cast<int>(nodes_.size()); }
  int NumInterface() const { return n_interface_; }
  int NumInterior() const { return n_interior_; }
  int NumDirichlet() const { return n_dirichlet_; }
  int NumFree() const { return n_interface_ + n_interior_; }

  const std::vector<Node> &nodes() const { return nodes_; }
  const Node &node(int dof) const { return nodes_[dof]; }

  // Element connectivity in DoF numbering, counterclockwise from the lower-left corner.
  const std::vector<std::array<int, 4>> &elements() const { return elements_; }

  // Lattice column range [ix_begin, ix_end] covered by this mesh.
  int IxBegin() const { return ix_begin_; }
  int IxEnd() const { return ix_end_; }
  int IxInterface() const;

  // DoF of lattice node (ix, iy), or -1 when the node is outside this mesh.
  int DofAt(int ix, int iy) const;

private:
  Region region_;
  int n_;
  double h_;
  int ix_begin_, ix_end_;
  int n_interface_ = 0, n_interior_ = 0, n_dirichlet_ = 0;
  std::vector<Node> nodes_;
  std::vector<std::array<int, 4>> elements_;
  std::vector<int> dof_of_lattice_;
};

// Left and right subdomain meshes with matching interface nodes.
std::pair<SubdomainMesh, SubdomainMesh> BuildMeshes(const DomainSpec &spec);

SubdomainMesh BuildFullMesh(const DomainSpec &spec);

// Free-DoF indices of the interface patch of size K: the free nodes on the interface
// line and on the K - 1 grid lines next to it, one line after the other by increasing
// distance from the interface, bottom-to-top within a line.
std::vector<int> PatchIndices(const SubdomainMesh &mesh, int patch_size);

}  // namespace partflux

#endif  // PARTFLUX_MESH_HPP
