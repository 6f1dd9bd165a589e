// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <set>
#include "partflux/error.hpp"
#include "partflux/mesh.hpp"

using namespace partflux;

TEST_CASE("node classification on a 4x4 grid")
{
  auto [left, right] = BuildMeshes(DomainSpec{4});
  for (const SubdomainMesh *m : {&left, &right})
  {
    CHECK(m->NumNodes() == 15);
    CHECK(m->NumInterface() == 3);
    CHECK(m->NumInterior() == 3);
    CHECK(m->NumDirichlet() == 9);
    CHECK(m->elements().size() == 8);
  }
}

TEST_CASE("smallest admissible grid")
{
  auto [left, right] = BuildMeshes(DomainSpec{2});
  CHECK(left.NumInterface() == 1);
  CHECK(left.NumInterior() == 0);
  CHECK(right.NumInterior() == 0);
}

TEST_CASE("64x64 grid")
{
  auto [left, right] = BuildMeshes(DomainSpec{64});
  CHECK(left.NumInterface() == 63);
  CHECK(left.h() == doctest::Approx(1.0 / 64));
  CHECK(left.NumNodes() == 33 * 65);
  CHECK(left.NumFree() == 32 * 63);
}

TEST_CASE("free DoFs come first, interface DoFs lead")
{
  const SubdomainMesh mesh(DomainSpec{8}, Region::Right);
  for (int r = 0; r < mesh.NumNodes(); r++)
  {
    const Node &nd = mesh.node(r);
    const bool boundary = nd.iy == 0 || nd.iy == 8 || nd.ix == 8;
    if (r < mesh.NumInterface())
    {
      CHECK(nd.ix == 4);
      CHECK_FALSE(boundary);
    }
    else if (r < mesh.NumFree())
    {
      CHECK(nd.ix > 4);
      CHECK_FALSE(boundary);
    }
    else
    {
      CHECK(boundary);
    }
    CHECK(mesh.DofAt(nd.ix, nd.iy) == r);
  }
  CHECK(mesh.DofAt(3, 3) == -1);
}

TEST_CASE("interface nodes match across the two sides")
{
  auto [left, right] = BuildMeshes(DomainSpec{16});
  REQUIRE(left.NumInterface() == right.NumInterface());
  for (int r = 0; r < left.NumInterface(); r++)
  {
    CHECK(left.node(r).x == right.node(r).x);
    CHECK(left.node(r).y == right.node(r).y);
  }
}

TEST_CASE("full mesh")
{
  const SubdomainMesh full = BuildFullMesh(DomainSpec{8});
  CHECK(full.NumNodes() == 81);
  CHECK(full.NumFree() == 49);
  CHECK(full.NumInterface() == 0);
}

TEST_CASE("interface patches")
{
  auto [left, right] = BuildMeshes(DomainSpec{64});
  CHECK(PatchIndices(left, 2).size() == 126);
  CHECK(PatchIndices(right, 2).size() == 126);

  const std::vector<int> one = PatchIndices(left, 1);
  REQUIRE(one.size() == 63);
  for (int i = 0; i < 63; i++)
  {
    CHECK(one[i] == i);
  }

  auto [l4, r4] = BuildMeshes(DomainSpec{4});
  const std::vector<int> p = PatchIndices(l4, 2);
  CHECK(p.size() == 6);
  CHECK(std::set<int>(p.begin(), p.end()).size() == 6);
  // Second line sits one cell away from the interface.
  CHECK(l4.node(p[3]).ix == 1);
  CHECK(l4.node(p[3]).iy < l4.node(p[4]).iy);
}

TEST_CASE("invalid grids are rejected")
{
  CHECK_THROWS_AS(BuildMeshes(DomainSpec{3}), Error);
  CHECK_THROWS_AS(BuildMeshes(DomainSpec{0}), Error);
  auto [left, right] = BuildMeshes(DomainSpec{4});
  CHECK_THROWS_AS(PatchIndices(left, 0), Error);
  CHECK_THROWS_AS(PatchIndices(left, 3), Error);
}
