#include <catch_amalgamated.hpp>

#include "support.hpp"
#include "twospin/gadgets.hpp"
#include "twospin/random_instances.hpp"
#include "twospin/spin_core.hpp"

using namespace twospin;
using twospin::testing::naive_partition;
using twospin::testing::relative_error;
using Catch::Approx;

namespace {

FieldedGraph<double> path3(double field) {
  FieldedGraph<double> g;
  g.add_vertex("u", field);
  g.add_vertex("v", field);
  g.add_vertex("w", field);
  g.add_edge("u", "v");
  g.add_edge("v", "w");
  return g;
}

FieldedGraph<double> k2(double field) {
  FieldedGraph<double> g;
  g.add_vertex("u", field);
  g.add_vertex("v", field);
  g.add_edge("u", "v");
  g.set_output(VertexIndex{0});
  return g;
}

}  // namespace

TEST_CASE("partition function of small graphs") {
  const SpinParams<double> p(1, 2, 2);
  CHECK(partition_function(k2(2), p) == Approx(10));
  CHECK(partition_function(path3(2), p) == Approx(34));
  FieldedGraph<double> single;
  single.add_vertex("x", 3.5);
  CHECK(partition_function(single, p) == Approx(4.5));
  CHECK(partition_function(FieldedGraph<double>{}, p) == 1.0);
}

TEST_CASE("pinned partition functions") {
  const SpinParams<double> p(1, 2, 2);
  FieldedGraph<double> single;
  single.add_vertex("x", 7);
  CHECK(pinned_partition(single, p, {{0, 0}}) == 7);
  CHECK(pinned_partition(single, p, {{0, 1}}) == 1);
  CHECK(pinned_partition(k2(2), p, {{1, 1}}) == Approx(4));
  CHECK_THROWS_AS(pinned_partition(single, p, {{3, 0}}), DomainError);
  PinAssignment pins;
  pins.pin(0, 1);
  CHECK_THROWS_AS(pins.pin(0, 0), DomainError);
  CHECK_THROWS_AS(pins.pin(1, 2), DomainError);
}

TEST_CASE("effective fields of elementary gadgets") {
  const SpinParams<double> p(1, 2, 20);
  FieldedGraph<double> single;
  single.add_vertex("o", 20);
  single.set_output(VertexIndex{0});
  CHECK(effective_field(single, p) == Approx(20));

  FieldedGraph<double> loop;
  loop.add_vertex("o", 20);
  loop.add_edge(0, 0);
  loop.set_output(VertexIndex{0});
  CHECK(effective_field(loop, p) == Approx(20 * 1.0 / 2.0));

  FieldedGraph<double> s1;
  s1.add_vertex("o", 20);
  s1.add_vertex("b", 20);
  s1.add_edge(0, 1);
  s1.set_output(VertexIndex{0});
  CHECK(effective_field(s1, p) == Approx(20.0 * 21.0 / 22.0).epsilon(1e-14));
  CHECK(effective_field(s1, p) == Approx(19.0909).margin(1e-4));

  CHECK_THROWS_AS(effective_field(path3(2), p), DomainError);
}

TEST_CASE("self-loops contribute A(s,s) and parallel edges multiply") {
  const SpinParams<double> p(0.5, 3, 2);
  FieldedGraph<double> g;
  g.add_vertex("a", 2);
  g.add_vertex("b", 1.5);
  g.add_edge(0, 0);
  g.add_edge(0, 1);
  g.add_edge(0, 1);
  CHECK(g.degree(0) == 4);
  // (s_a, s_b): (0,0) 2*1.5*0.5*0.5^2, (0,1) 2*0.5*1, (1,0) 1.5*3*1, (1,1) 3*9
  const double expected = 2 * 1.5 * 0.5 * 0.25 + 2 * 0.5 + 1.5 * 3 + 3 * 9;
  CHECK(partition_function(g, p) == Approx(expected).epsilon(1e-14));
}

TEST_CASE("validation errors") {
  FieldedGraph<double> g;
  CHECK_THROWS_AS(g.add_vertex("x", 0.0), DomainError);
  CHECK_THROWS_AS(g.add_vertex("x", -1.0), DomainError);
  g.add_vertex("x", 1.0);
  CHECK_THROWS_AS(g.add_vertex("x", 2.0), DomainError);
  CHECK_THROWS_AS(g.add_edge("x", "y"), DomainError);
  CHECK_THROWS_AS(SpinParams<double>(1, 2, 0), DomainError);
  CHECK_THROWS_AS(SpinParams<double>(-1, 2, 1), DomainError);
  CHECK(SpinParams<double>(1, 2, 1).regime() == Regime::Ferromagnetic);
  CHECK(SpinParams<double>(0.5, 1, 1).regime() == Regime::AntiFerromagnetic);
  CHECK(SpinParams<double>(0.5, 2, 1).regime() == Regime::Degenerate);

  FieldedGraph<double> big;
  for (int i = 0; i < 5; ++i) big.add_vertex("v" + std::to_string(i), 1.0);
  CHECK_THROWS_AS(partition_function(big, SpinParams<double>(1, 2, 1), 4), CapacityError);
  CHECK_NOTHROW(partition_function(big, SpinParams<double>(1, 2, 1), 5));
}

TEST_CASE("factorized enumeration matches the naive oracle") {
  Rng rng(7);
  const SpinParams<double> p(0.7, 2.3, 1.1);
  for (int trial = 0; trial < 60; ++trial) {
    FieldedGraph<double> g = random_connected_graph(rng, 11);
    for (VertexIndex v = 0; v < g.size(); ++v) g.set_field(v, 0.25 + 3.0 * rng.uniform());
    CHECK(relative_error(partition_function(g, p), naive_partition(g, p)) < 1e-12);
    const VertexIndex v = rng.below(g.size());
    const double z0 = pinned_partition(g, p, {{v, 0}});
    const double z1 = pinned_partition(g, p, {{v, 1}});
    CHECK(relative_error(z0, naive_partition(g, p, {{v, 0}})) < 1e-12);
    CHECK(relative_error(z0 + z1, partition_function(g, p)) < 1e-12);
  }
}

TEST_CASE("exact mode agrees with the naive oracle") {
  Rng rng(11);
  const SpinParams<QuadraticNumber> p(QuadraticNumber(mpq_class(4, 5)), QuadraticNumber(2),
                                      QuadraticNumber(mpq_class(3, 2)));
  for (int trial = 0; trial < 20; ++trial) {
    const FieldedGraph<QuadraticNumber> g =
        with_uniform_field(random_connected_graph(rng, 9), QuadraticNumber(mpq_class(3, 2)));
    CHECK(partition_function(g, p) == naive_partition(g, p));
  }
}

TEST_CASE("relabeling, isolated vertices and log-space evaluation") {
  const SpinParams<double> p(1, 2, 2);
  FieldedGraph<double> a;
  a.add_vertex("x", 1.5);
  a.add_vertex("y", 2.5);
  a.add_vertex("z", 0.5);
  a.add_edge("x", "y");
  a.add_edge("y", "z");
  a.add_edge("z", "z");
  FieldedGraph<double> b;
  b.add_vertex("z", 0.5);
  b.add_vertex("y", 2.5);
  b.add_vertex("x", 1.5);
  b.add_edge("z", "z");
  b.add_edge("z", "y");
  b.add_edge("y", "x");
  CHECK(relative_error(partition_function(a, p), partition_function(b, p)) < 1e-14);

  FieldedGraph<double> c = a;
  c.add_vertex("iso", 4.0);
  CHECK(relative_error(partition_function(c, p), 5.0 * partition_function(a, p)) < 1e-14);

  CHECK(log_partition_function(a, p) == Approx(std::log(partition_function(a, p))).epsilon(1e-14));
}

TEST_CASE("log-space evaluation survives overflow") {
  FieldedGraph<double> g;
  for (int i = 0; i < 10; ++i) g.add_vertex("v" + std::to_string(i), 1e300);
  const double log_z = log_partition_function(g, SpinParams<double>(1, 2, 1));
  // prod (1e300 + 1)
  CHECK(log_z == Approx(10 * 300 * std::log(10.0)).epsilon(1e-12));
}

TEST_CASE("effective field of small gadgets matches the recursive evaluation") {
  Rng rng(3);
  const SpinParams<double> p(0.9, 2.5, 4.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Gadget gadget = random_gadget(rng, 14);
    const auto graph = materialize(gadget, p.mu);
    CHECK(graph.size() == gadget.size());
    CHECK(relative_error(effective_field(graph, p), gadget_field(gadget, p)) < 1e-10);
  }
}
