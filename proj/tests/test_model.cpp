#include <gtest/gtest.h>

#include <cmath>

#include "cifh/model.hpp"

using namespace cifh;

namespace {

std::string field_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ValidationError& e) {
    return e.field_path();
  }
  return "<no error>";
}

}  // namespace

TEST(Instance, CanonicalizesEdges) {
  auto inst = CifhInstance::create(3, {{2, 0, 1.0}, {1, 0, 0.5}}, {0, 0, 0}, {{2, 1, -0.3}}, Convention::Traceless);
  ASSERT_EQ(inst.interaction_edges().size(), 2u);
  EXPECT_EQ(inst.interaction_edges()[0], (Edge{0, 1, 0.5}));
  EXPECT_EQ(inst.interaction_edges()[1], (Edge{0, 2, 1.0}));
  EXPECT_EQ(inst.hopping_edges()[0], (Edge{1, 2, -0.3}));
  EXPECT_DOUBLE_EQ(inst.total_interaction_weight(), 1.5);
  EXPECT_EQ(inst.interaction_degrees(), (std::vector<int>{2, 1, 1}));
}

TEST(Instance, RejectsInvalidData) {
  EXPECT_THROW(CifhInstance::create(2, {{0, 0, 1.0}}, {0, 0}, {}, Convention::Traceless), ValidationError);
  EXPECT_THROW(CifhInstance::create(2, {{0, 2, 1.0}}, {0, 0}, {}, Convention::Traceless), ValidationError);
  EXPECT_THROW(CifhInstance::create(2, {{0, 1, -1.0}}, {0, 0}, {}, Convention::Traceless), ValidationError);
  EXPECT_THROW(CifhInstance::create(2, {{0, 1, 1.0}, {1, 0, 2.0}}, {0, 0}, {}, Convention::Traceless), ValidationError);
  EXPECT_THROW(CifhInstance::create(2, {}, {0}, {}, Convention::Traceless), ValidationError);
  EXPECT_THROW(CifhInstance::create(2, {}, {0, std::nan("")}, {}, Convention::Traceless), ValidationError);
  EXPECT_THROW(CifhInstance::create(2, {}, {-1, 0}, {}, Convention::Psd), ValidationError);
  EXPECT_THROW(CifhInstance::create(4, {}, {0, 0, 0, 0}, {}, Convention::Traceless, 2.5), ValidationError);
  EXPECT_NO_THROW(CifhInstance::create(4, {}, {0, 0, 0, 0}, {}, Convention::Traceless, 2.0));
}

TEST(Instance, FmcDerivesPotentials) {
  const auto inst = fmc_from_graph(3, {{0, 1, 1.0}, {1, 2, 2.0}});
  EXPECT_EQ(inst.convention(), Convention::Fmc);
  EXPECT_EQ(inst.potentials(), (std::vector<double>{0.5, 1.5, 1.0}));
  ASSERT_EQ(inst.hopping_edges().size(), 2u);
  EXPECT_DOUBLE_EQ(inst.hopping_edges()[1].weight, 1.0);
  EXPECT_THROW(CifhInstance::create(2, {{0, 1, 1.0}}, {0.5, 0.5}, {{0, 1, 0.7}}, Convention::Fmc), ValidationError);
}

TEST(Serialization, RoundTripIsExactAndCanonical) {
  RandomSpec rs;
  rs.n = 7;
  rs.seed = 11;
  const auto inst = random_instance(rs);
  const std::string doc = serialize_instance(inst);
  const auto back = parse_instance(doc);
  EXPECT_EQ(back, inst);
  EXPECT_EQ(serialize_instance(back), doc);
  EXPECT_EQ(instance_digest(back), instance_digest(inst));
}

TEST(Serialization, DocumentsAreOneBased) {
  const auto inst = parse_instance(R"({"version":1,"n":2,"convention":"traceless",
    "interaction_edges":[[1,2,0.5]],"potentials":[0.1,0.2],"hopping_edges":[]})");
  EXPECT_EQ(inst.interaction_edges()[0], (Edge{0, 1, 0.5}));
}

TEST(Serialization, ErrorsCarryFieldPaths) {
  EXPECT_EQ(field_of([] { parse_instance(R"({"version":1,"n":2,"convention":"traceless","bogus":1,
      "interaction_edges":[],"potentials":[0,0],"hopping_edges":[]})"); }),
            "bogus");
  EXPECT_EQ(field_of([] { parse_instance(R"({"version":1,"n":2,"convention":"traceless",
      "interaction_edges":[[1,2,-1]],"potentials":[0,0],"hopping_edges":[]})"); }).rfind("interaction_edges", 0),
            0u);
  EXPECT_EQ(field_of([] { parse_instance("{not json"); }), "$");
}

TEST(Split, ReassemblesTheInstance) {
  const auto inst = hubbard_triangle(1.0, 2.0, 0.3);
  const auto split = HamiltonianSplit::of(inst);
  EXPECT_EQ(split.reassemble(), inst);
  EXPECT_EQ(split.classical_part.edges->size(), 3u);
  EXPECT_EQ(split.quadratic_part.edges->size(), 6u);
}

TEST(Generators, HubbardTriangleLayout) {
  const auto inst = hubbard_triangle(1.0, 2.0, 0.0);
  EXPECT_EQ(inst.n(), 6);
  for (const Edge& e : inst.interaction_edges()) {
    EXPECT_EQ(e.k, e.j + 1);
    EXPECT_EQ(e.j % 2, 0);
    EXPECT_DOUBLE_EQ(e.weight, 2.0);
  }
  for (const Edge& e : inst.hopping_edges()) EXPECT_EQ(e.j % 2, e.k % 2);
}

TEST(Generators, RandomIsReproducibleAndBipartiteWhenAsked) {
  RandomSpec rs;
  rs.n = 9;
  rs.bipartite = true;
  rs.interaction_density = 1.0;
  rs.seed = 5;
  const auto a = random_instance(rs);
  EXPECT_EQ(a, random_instance(rs));
  rs.seed = 6;
  EXPECT_NE(a, random_instance(rs));
}

TEST(Generators, DispatcherValidatesParameters) {
  EXPECT_EQ(generate("hubbard-triangle", {{"t", "1"}, {"U", "2"}}), hubbard_triangle(1, 2, 0));
  EXPECT_EQ(generate("Heisenberg_Line4", {}), heisenberg_line4());
  EXPECT_EQ(field_of([] { generate("hubbard-triangle", {{"tt", "1"}}); }), "tt");
  EXPECT_EQ(field_of([] { generate("random", {{"n", "4"}}); }), "seed");
  EXPECT_EQ(field_of([] { generate("nope", {}); }), "kind");
  EXPECT_EQ(generate("fmc-graph", {{"graph", "line4"}}).n(), 4);
}

TEST(Generators, ScaleClassicalLeavesHoppingAlone) {
  const auto inst = hubbard_triangle(1.0, 2.0, 0.5);
  const auto s = scale_classical(inst, 3.0);
  EXPECT_DOUBLE_EQ(s.interaction_edges()[0].weight, 6.0);
  EXPECT_DOUBLE_EQ(s.potentials()[0], 1.5);
  EXPECT_EQ(s.hopping_edges(), inst.hopping_edges());
  EXPECT_THROW(scale_classical(fmc_from_graph(2, {{0, 1, 1.0}}), 2.0), Error);
}
