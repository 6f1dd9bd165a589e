// SPDX-License-Identifier: Apache-2.0

#include "partflux/mesh.hpp"

#include <string>
#include "partflux/error.hpp"

namespace partflux
{

int SideOf(Region region)
{
  return region == Region::Right ? 2 : 1;
}

namespace
{

enum class NodeClass
{
  Interface,
  Interior,
  Dirichlet
};

}  // namespace

SubdomainMesh::SubdomainMesh(const DomainSpec &spec, Region region)
  : region_(region), n_(spec.n), h_(0.0)
{
  Require(spec.n >= 2 && spec.n % 2 == 0, ErrorKind::InvalidArgument,
          "grid size N must be a positive even integer, got " + std::to_string(spec.n));
  h_ = 1.0 / n_;
  const int mid = n_ / 2;
  switch (region_)
  {
    case Region::Left:
      ix_begin_ = 0;
      ix_end_ = mid;
      break;
    case Region::Right:
      ix_begin_ = mid;
      ix_end_ = n_;
      break;
    case Region::Full:
      ix_begin_ = 0;
      ix_end_ = n_;
      break;
  }

  auto classify = [&](int ix, int iy)
  {
    if (ix == 0 || ix == n_ || iy == 0 || iy == n_)
    {
      return NodeClass::Dirichlet;
    }
    if (region_ != Region::Full && ix == mid)
    {
      return NodeClass::Interface;
    }
    return NodeClass::Interior;
  };

  const int nx = ix_end_ - ix_begin_ + 1;
  const int ny = n_ + 1;
  dof_of_lattice_.assign(static_cast<std::size_t>(nx) * ny, -1);
  nodes_.reserve(static_cast<std::size_t>(nx) * ny);
  for (NodeClass cls : {NodeClass::Interface, NodeClass::Interior, NodeClass::Dirichlet})
  {
    for (int ix = ix_begin_; ix <= ix_end_; ix++)
    {
      for (int iy = 0; iy <= n_; iy++)
      {
        if (classify(ix, iy) != cls)
        {
          continue;
        }
        dof_of_lattice_[(ix - ix_begin_) * ny + iy] = static_cast<int>(nodes_.size());
        nodes_.push_back({ix * h_, iy * h_, ix, iy});
        switch (cls)
        {
          case NodeClass::Interface:
            n_interface_++;
            break;
          case NodeClass::Interior:
            n_interior_++;
            break;
          case NodeClass::Dirichlet:
            n_dirichlet_++;
            break;
        }
      }
    }
  }

  elements_.reserve(static_cast<std::size_t>(nx - 1) * n_);
  for (int ix = ix_begin_; ix < ix_end_; ix++)
  {
    for (int iy = 0; iy < n_; iy++)
    {
      elements_.push_back({DofAt(ix, iy), DofAt(ix + 1, iy), DofAt(ix + 1, iy + 1),
                           DofAt(ix, iy + 1)});
    }
  }
}

int SubdomainMesh::IxInterface() const
{
  Require(region_ != Region::Full, ErrorKind::InvalidArgument,
          "the full-domain mesh has no interface");
  return n_ / 2;
}

int SubdomainMesh::DofAt(int ix, int iy) const
{
  if (ix < ix_begin_ || ix > ix_end_ || iy < 0 || iy > n_)
  {
    return -1;
  }
  return dof_of_lattice_[(ix - ix_begin_) * (n_ + 1) + iy];
}

std::pair<SubdomainMesh, SubdomainMesh> BuildMeshes(const DomainSpec &spec)
{
  return {SubdomainMesh(spec, Region::Left), SubdomainMesh(spec, Region::Right)};
}

SubdomainMesh BuildFullMesh(const DomainSpec &spec)
{
  return SubdomainMesh(spec, Region::Full);
}

std::vector<int> PatchIndices(const SubdomainMesh &mesh, int patch_size)
{
  const int half = mesh.n() / 2;
  Require(patch_size >= 1 && patch_size <= half, ErrorKind::InvalidArgument,
          "patch size must lie in [1, N/2] = [1, " + std::to_string(half) + "], got " +
              std::to_string(patch_size));
  const int ix_gamma = mesh.IxInterface();
  // Lines move away from the interface: left for subdomain 1, right for subdomain 2.
  const int step = mesh.region() == Region::Left ? -1 : 1;
  std::vector<int> indices;
  indices.reserve(static_cast<std::size_t>(patch_size) * (mesh.n() - 1));
  for (int line = 0; line < patch_size; line++)
  {
    const int ix = ix_gamma + step * line;
    for (int iy = 1; iy < mesh.n(); iy++)
    {
      indices.push_back(mesh.DofAt(ix, iy));
    }
  }
  return indices;
}

}  // namespace partflux
