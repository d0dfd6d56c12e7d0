// ==== test_genspace.cpp — topologies, general frames and spaces, gluing ====

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "topos4/algebra.hpp"
#include "topos4/genspace.hpp"

using namespace topos4;

// Sierpinski space with 1 the dense point: opens are {}, {1}, X.
static FiniteTopology sierpinski_space() {
    return topology_from_opens(
        2, {empty_set(2), make_set(2, {1}), full_set(2)});
}

// Exception message, for substring checks on witnesses.
template <typename E, typename Fn>
static std::string message_of(Fn&& fn) {
    try {
        fn();
    } catch (const E& e) {
        return e.what();
    }
    return "";
}

TEST_CASE("topology construction validates and computes interiors") {
    FiniteTopology t = sierpinski_space();
    CHECK(t.is_open(make_set(2, {1})));
    CHECK_FALSE(t.is_open(make_set(2, {0})));
    CHECK(t.interior(make_set(2, {0})) == empty_set(2));
    CHECK(t.interior(make_set(2, {1})) == make_set(2, {1}));
    CHECK(t.closure(make_set(2, {1})) == full_set(2));
    CHECK(t.closure(make_set(2, {0})) == make_set(2, {0}));

    CHECK(discrete_topology(3).opens.size() == 8);
    CHECK(indiscrete_topology(3).opens.size() == 2);
    CHECK(indiscrete_topology(0).opens.size() == 1);

    // missing empty set or carrier
    CHECK_THROWS_AS(topology_from_opens(2, {make_set(2, {1}), full_set(2)}),
                    PreconditionError);
    CHECK_THROWS_AS(topology_from_opens(2, {empty_set(2), make_set(2, {1})}),
                    PreconditionError);
    // {0} and {1} present but their union {0,1} missing
    std::string msg = message_of<PreconditionError>([] {
        topology_from_opens(3, {empty_set(3), make_set(3, {0}),
                                make_set(3, {1}), full_set(3)});
    });
    CHECK(msg.find("union") != std::string::npos);
    // {0,1} and {1,2} present but their intersection {1} missing
    msg = message_of<PreconditionError>([] {
        topology_from_opens(3, {empty_set(3), make_set(3, {0, 1}),
                                make_set(3, {1, 2}), full_set(3)});
    });
    CHECK(msg.find("intersection") != std::string::npos);
    CHECK_THROWS_AS(topology_from_opens(2, {empty_set(3), full_set(2)}),
                    PreconditionError);
    CHECK_THROWS_AS(discrete_topology(17), ResourceCapError);
}

TEST_CASE("specialization order matches tools/oracle/genspace.py") {
    std::vector<std::pair<size_t, size_t>> sier{{0, 0}, {0, 1}, {1, 1}};
    CHECK(relation_pairs(specialization_order(sierpinski_space())) == sier);

    FiniteFrame disc = specialization_order(discrete_topology(3));
    CHECK(relation_pairs(disc) ==
          std::vector<std::pair<size_t, size_t>>{{0, 0}, {1, 1}, {2, 2}});

    FiniteFrame indisc = specialization_order(indiscrete_topology(2));
    CHECK(relation_pairs(indisc).size() == 4);  // total relation
}

TEST_CASE("alexandroff opens are the upsets, frozen small cases") {
    FiniteTopology cluster = alexandroff_topology(make_cluster(2));
    CHECK(cluster.opens == std::vector<Subset>{empty_set(2), full_set(2)});

    FiniteTopology chain = alexandroff_topology(make_chain(2));
    CHECK(chain == sierpinski_space());

    FiniteFrame order3 = make_frame(3, {{0, 0}, {1, 1}, {2, 2}});
    CHECK(alexandroff_topology(order3).opens.size() == 8);

    CHECK_THROWS_AS(alexandroff_topology(make_frame(2, {{0, 0}, {0, 1}})),
                    PreconditionError);
    std::vector<std::pair<size_t, size_t>> refl;
    for (size_t w = 0; w < 17; ++w) refl.push_back({w, w});
    CHECK_THROWS_AS(alexandroff_topology(make_frame(17, refl)),
                    ResourceCapError);
}

TEST_CASE("order and topology round trips on the full size-3 catalog") {
    for (const FiniteFrame& f : enumerate_preorders(3)) {
        FiniteTopology t = alexandroff_topology(f);
        CHECK(specialization_order(t).rel == f.rel);
        CHECK(alexandroff_topology(specialization_order(t)) == t);

        // all three connectedness readings agree
        size_t clopen = 0;
        for (const Subset& o : t.opens) {
            if (t.is_open(~o)) ++clopen;
        }
        bool topo_connected = clopen == 2;
        CHECK(topo_connected == is_connected_frame(f));
        CHECK(topo_connected == is_connected(powerset_field(f)));
    }
}

TEST_CASE("general structure constructors validate their field") {
    FiniteFrame fork = make_fork(1);
    GeneralStructure g = general_frame_powerset(fork);
    CHECK(g.kind == BaseKind::Frame);
    CHECK(g.field.members.size() == 8);

    // {1} closes to {0,1} under the fork relation, which is missing
    std::string msg = message_of<PreconditionError>([&] {
        make_general_frame(fork, {empty_set(3), make_set(3, {1}),
                                  make_set(3, {0, 2}), full_set(3)});
    });
    CHECK(msg.find("closure") != std::string::npos);

    msg = message_of<PreconditionError>([&] {
        make_general_frame(fork, {empty_set(3), make_set(3, {1}), full_set(3)});
    });
    CHECK(msg.find("complement") != std::string::npos);

    CHECK_THROWS_AS(make_general_frame(fork, {make_set(3, {1}),
                                              make_set(3, {0, 2})}),
                    PreconditionError);
    CHECK_THROWS_AS(make_general_frame(make_frame(2, {{0, 0}, {0, 1}}),
                                       {empty_set(2), full_set(2)}),
                    PreconditionError);

    GeneralStructure s = make_general_space(
        sierpinski_space(), {empty_set(2), make_set(2, {0}),
                             make_set(2, {1}), full_set(2)});
    CHECK(s.kind == BaseKind::Space);
    CHECK(s.field.closure.close(make_set(2, {1})) == full_set(2));
}

TEST_CASE("descriptive checks match tools/oracle/genspace.py") {
    // cluster with the trivial field: tight vacuously, not differentiated
    GeneralStructure c2 = make_general_frame(
        make_cluster(2), {empty_set(2), full_set(2)});
    DescriptiveReport rep = check_descriptive(c2);
    CHECK_FALSE(rep.differentiated);
    CHECK(rep.diff_w == 0);
    CHECK(rep.diff_v == 1);
    CHECK(rep.compact);
    CHECK(rep.compact_note.find("vacuously compact") != std::string::npos);
    CHECK(rep.tight);
    CHECK_FALSE(rep.all());

    GeneralStructure sier = general_space_powerset(sierpinski_space());
    CHECK(check_descriptive(sier).all());

    // the chain separates (1,0) relationally but the trivial field cannot
    GeneralStructure chain = make_general_frame(
        make_chain(2), {empty_set(2), full_set(2)});
    rep = check_descriptive(chain);
    CHECK_FALSE(rep.tight);
    CHECK(rep.tight_detail.find("world 1 does not see world 0") !=
          std::string::npos);

    // indiscrete two-point space, trivial field: tight but merged points
    GeneralStructure indisc = make_general_space(
        indiscrete_topology(2), {empty_set(2), full_set(2)});
    rep = check_descriptive(indisc);
    CHECK_FALSE(rep.differentiated);
    CHECK(rep.tight);

    // discrete two-point space, trivial field: {0} has no open cover
    GeneralStructure disc = make_general_space(
        discrete_topology(2), {empty_set(2), full_set(2)});
    rep = check_descriptive(disc);
    CHECK_FALSE(rep.tight);
    CHECK(rep.tight_detail.find("{0}") != std::string::npos);
}

TEST_CASE("to_frame and to_space convert and verify closure agreement") {
    GeneralStructure sier = general_space_powerset(sierpinski_space());
    GeneralStructure fr = to_frame(sier);
    CHECK(fr.kind == BaseKind::Frame);
    CHECK(relation_pairs(fr.frame) ==
          std::vector<std::pair<size_t, size_t>>{{0, 0}, {0, 1}, {1, 1}});
    CHECK(fr.field.members.size() == 4);

    GeneralStructure chain = general_frame_powerset(make_chain(2));
    GeneralStructure sp = to_space(chain);
    CHECK(sp.kind == BaseKind::Space);
    CHECK(sp.space == sierpinski_space());

    // a cluster with the trivial field is tight, its space is indiscrete
    GeneralStructure c2 = make_general_frame(
        make_cluster(2), {empty_set(2), full_set(2)});
    CHECK(to_space(c2).space == indiscrete_topology(2));

    // non-tight inputs are rejected with the witness
    GeneralStructure thin_chain = make_general_frame(
        make_chain(2), {empty_set(2), full_set(2)});
    std::string msg =
        message_of<PreconditionError>([&] { to_space(thin_chain); });
    CHECK(msg.find("does not see") != std::string::npos);

    GeneralStructure disc = make_general_space(
        discrete_topology(2), {empty_set(2), full_set(2)});
    CHECK_THROWS_AS(to_frame(disc), PreconditionError);

    CHECK_THROWS_AS(to_frame(chain), PreconditionError);
    CHECK_THROWS_AS(to_space(sier), PreconditionError);
}

TEST_CASE("general round trips on random preorders keep field and order") {
    std::mt19937_64 rng(0);
    std::uniform_int_distribution<size_t> size(1, 6);
    for (int trial = 0; trial < 100; ++trial) {
        FiniteFrame f = testgen::random_preorder(rng, size(rng));
        GeneralStructure g = general_frame_powerset(f);
        CHECK(check_descriptive(g).all());

        GeneralStructure sp = to_space(g);
        for (const Subset& m : g.field.members) {
            CHECK(sp.space.closure(m) == g.field.closure.close(m));
        }
        GeneralStructure back = to_frame(sp);
        CHECK(back.frame.rel == f.rel);
        CHECK(back.field.members == g.field.members);
    }
}

TEST_CASE("interior map checks name the violated open or member") {
    FiniteTopology sier = sierpinski_space();
    FiniteTopology disc = discrete_topology(2);
    std::vector<size_t> ident{0, 1};

    InteriorMapReport rep = check_interior_map(ident, sier, disc);
    CHECK_FALSE(rep.ok);
    CHECK(rep.failed == "continuity");
    CHECK(rep.detail.find("of open {0}") != std::string::npos);

    rep = check_interior_map(ident, disc, sier);
    CHECK_FALSE(rep.ok);
    CHECK(rep.failed == "openness");
    CHECK(rep.detail.find("{0}") != std::string::npos);

    rep = check_interior_map(ident, sier, sier);
    CHECK(rep.ok);
    CHECK(rep.onto);
    rep = check_interior_map({1, 1}, sier, sier);
    CHECK(rep.ok);
    CHECK_FALSE(rep.onto);

    rep = check_interior_map({5, 0}, sier, sier);
    CHECK_FALSE(rep.ok);
    CHECK(rep.failed == "range");

    CHECK_THROWS_AS(check_interior_map({0}, sier, sier), PreconditionError);
}

TEST_CASE("interior map checks on general structures use the order form") {
    GeneralStructure chain = general_frame_powerset(make_chain(2));
    GeneralStructure two = general_frame_powerset(
        make_frame(2, {{0, 0}, {1, 1}}));
    std::vector<size_t> ident{0, 1};

    // 0 relates to 1 in the chain but not in the discrete order
    InteriorMapReport rep = check_interior_map(ident, chain, two);
    CHECK_FALSE(rep.ok);
    CHECK(rep.failed == "continuity");

    // back failure: nothing above 0 maps onto 1
    rep = check_interior_map(ident, two, chain);
    CHECK_FALSE(rep.ok);
    CHECK(rep.failed == "openness");

    // same order, source field too small to pull the target field back
    GeneralStructure thin = make_general_frame(
        make_chain(2), {empty_set(2), full_set(2)});
    rep = check_interior_map(ident, thin, chain);
    CHECK_FALSE(rep.ok);
    CHECK(rep.failed == "field-pullback");
    CHECK(rep.detail.find("{0}") != std::string::npos);

    rep = check_interior_map(ident, chain, thin);
    CHECK(rep.ok);
    CHECK(rep.onto);

    // mixed kinds compare through the specialization order
    GeneralStructure sier = general_space_powerset(sierpinski_space());
    rep = check_interior_map(ident, sier, chain);
    CHECK(rep.ok);
    rep = check_interior_map(ident, chain, sier);
    CHECK(rep.ok);
}

TEST_CASE("sums take traces: frozen opens from tools/oracle/genspace.py") {
    GeneralStructure sier = general_space_powerset(sierpinski_space());
    SumResult two = sum({sier, sier});
    CHECK(two.structure.carrier() == 4);
    CHECK(two.injections ==
          std::vector<std::vector<size_t>>{{0, 1}, {2, 3}});

    // values frozen from tools/oracle/genspace.py
    std::vector<unsigned long> expected{0, 2, 3, 8, 10, 11, 12, 14, 15};
    std::vector<unsigned long> got;
    for (const Subset& o : two.structure.space.opens) {
        got.push_back(o.to_ulong());
    }
    CHECK(got == expected);
    CHECK(two.structure.field.members.size() == 16);

    SumResult none = sum({});
    CHECK(none.structure.carrier() == 0);
    CHECK(none.structure.kind == BaseKind::Space);
    CHECK(none.structure.field.members.size() == 1);

    GeneralStructure fork = general_frame_powerset(make_fork(1));
    SumResult one = sum({fork});
    CHECK(one.structure.frame.rel == fork.frame.rel);
    CHECK(one.structure.field.members == fork.field.members);

    GeneralStructure chain = general_frame_powerset(make_chain(2));
    SumResult pair = sum({chain, chain});
    CHECK(relation_pairs(pair.structure.frame) ==
          std::vector<std::pair<size_t, size_t>>{
              {0, 0}, {0, 1}, {1, 1}, {2, 2}, {2, 3}, {3, 3}});
    CHECK(pair.structure.field.members.size() == 16);

    CHECK_THROWS_AS(sum({sier, chain}), PreconditionError);
}

TEST_CASE("gluing two forks at the terminal matches tools/oracle/frame_families.py") {
    GeneralStructure fork = general_frame_powerset(make_fork(1));
    GeneralStructure point = general_frame_powerset(make_frame(1, {{0, 0}}));

    GluingSpec spec;
    spec.parts = {fork, fork};
    spec.shared = point;
    spec.embeddings = {{1}, {1}};
    GluingResult r = glue(spec);

    CHECK(r.glued.carrier() == 5);
    std::vector<std::pair<size_t, size_t>> expected{
        {0, 0}, {0, 1}, {0, 2}, {1, 1}, {2, 2},
        {3, 1}, {3, 3}, {3, 4}, {4, 4}};
    CHECK(relation_pairs(r.glued.frame) == expected);
    CHECK(r.glued.frame.labels ==
          std::vector<std::string>{"p0.r", "p0.m", "p0.w0", "p1.r", "p1.w0"});
    CHECK(r.projections ==
          std::vector<std::vector<size_t>>{{0, 1, 2}, {3, 1, 4}});
    CHECK(roots(r.glued.frame).empty());
    CHECK(r.glued.field.members.size() == 32);
    CHECK(r.rho.ok);
    CHECK(r.rho.onto);

    // a single part glues to an isomorphic copy
    GluingSpec single;
    single.parts = {fork};
    single.shared = point;
    single.embeddings = {{1}};
    GluingResult copy = glue(single);
    CHECK(copy.glued.frame.rel == fork.frame.rel);
    CHECK(copy.projections == std::vector<std::vector<size_t>>{{0, 1, 2}});
}

TEST_CASE("gluing two sierpinski spaces at the open point") {
    GeneralStructure sier = general_space_powerset(sierpinski_space());
    FiniteTopology pt = discrete_topology(1);
    GeneralStructure point = general_space_powerset(pt);

    GluingSpec spec;
    spec.parts = {sier, sier};
    spec.shared = point;
    spec.embeddings = {{1}, {1}};
    GluingResult r = glue(spec);

    CHECK(r.glued.carrier() == 3);
    std::vector<unsigned long> opens;
    for (const Subset& o : r.glued.space.opens) opens.push_back(o.to_ulong());
    CHECK(opens == std::vector<unsigned long>{0, 2, 3, 6, 7});
    CHECK(r.glued.field.members.size() == 8);
    CHECK(r.rho.ok);

    // both closed points specialize to the shared open point
    FiniteFrame order = specialization_order(r.glued.space);
    CHECK(order.related(0, 1));
    CHECK(order.related(2, 1));
    CHECK_FALSE(order.related(0, 2));
}

TEST_CASE("gluing specs are validated part by part") {
    GeneralStructure fork = general_frame_powerset(make_fork(1));
    GeneralStructure point = general_frame_powerset(make_frame(1, {{0, 0}}));
    GeneralStructure cluster = general_frame_powerset(make_cluster(2));
    GeneralStructure two = general_frame_powerset(
        make_frame(2, {{0, 0}, {1, 1}}));

    GluingSpec spec;
    spec.parts = {fork, fork};
    spec.shared = point;

    spec.embeddings = {{0}, {1}};  // image {0} is the root, not an upset
    std::string msg = message_of<PreconditionError>([&] { glue(spec); });
    CHECK(msg.find("not open") != std::string::npos);

    spec.embeddings = {{1}};
    CHECK_THROWS_AS(glue(spec), PreconditionError);
    spec.embeddings = {{1}, {3}};
    CHECK_THROWS_AS(glue(spec), PreconditionError);

    // discrete two points embedded onto a genuine cluster
    GluingSpec mis;
    mis.parts = {cluster, cluster};
    mis.shared = two;
    mis.embeddings = {{0, 1}, {0, 1}};
    msg = message_of<PreconditionError>([&] { glue(mis); });
    CHECK(msg.find("shared relation") != std::string::npos);

    GluingSpec dup;
    dup.parts = {cluster, cluster};
    dup.shared = two;
    dup.embeddings = {{0, 0}, {0, 1}};
    msg = message_of<PreconditionError>([&] { glue(dup); });
    CHECK(msg.find("injective") != std::string::npos);

    // shared field poorer than the pullback of the part field
    GluingSpec poor;
    poor.parts = {cluster, cluster};
    poor.shared = make_general_frame(make_cluster(2),
                                     {empty_set(2), full_set(2)});
    poor.embeddings = {{0, 1}, {0, 1}};
    msg = message_of<PreconditionError>([&] { glue(poor); });
    CHECK(msg.find("field") != std::string::npos);

    GluingSpec empty_spec;
    CHECK_THROWS_AS(glue(empty_spec), PreconditionError);

    GeneralStructure sier = general_space_powerset(sierpinski_space());
    GluingSpec mixed;
    mixed.parts = {fork, sier};
    mixed.shared = point;
    mixed.embeddings = {{1}, {1}};
    CHECK_THROWS_AS(glue(mixed), PreconditionError);
}

TEST_CASE("random gluing specs produce interior onto quotients") {
    std::mt19937_64 rng(0);
    for (int trial = 0; trial < 25; ++trial) {
        size_t parts = 2 + (trial % 2);
        GluingSpec spec = testgen::random_gluing_spec(rng, 4, 3, parts);
        GluingResult r = glue(spec);
        CHECK(r.rho.ok);
        CHECK(r.rho.onto);

        // carrier counts: all parts share one copy of the shared core
        size_t expected = spec.shared.carrier();
        for (const GeneralStructure& p : spec.parts) {
            expected += p.carrier() - spec.shared.carrier();
        }
        CHECK(r.glued.carrier() == expected);
        CHECK(check_s4(r.glued.frame).ok);
    }
}

TEST_CASE("space json round trips and rejects tampering") {
    GeneralStructure sier = general_space_powerset(sierpinski_space());
    nlohmann::json j = space_to_json(sier);
    CHECK(j["carrier"] == 2);
    CHECK(j["opens"] == nlohmann::json::array({0, 2, 3}));
    CHECK(j["field"] == nlohmann::json::array({0, 1, 2, 3}));

    GeneralStructure back = space_from_json(j);
    CHECK(back.space == sier.space);
    CHECK(back.field.members == sier.field.members);

    nlohmann::json bad = j;
    bad.erase("field");
    CHECK_THROWS_AS(space_from_json(bad), PreconditionError);

    bad = j;
    bad["opens"] = {0, 1, 2};  // {0} and {1} without their union
    CHECK_THROWS_AS(space_from_json(bad), PreconditionError);

    bad = j;
    bad["field"] = {0, 5, 3};  // 5 is no subset mask over two points
    CHECK_THROWS_AS(space_from_json(bad), PreconditionError);

    bad = j;
    bad["field"] = {0, 2, 3};  // missing the complement of {1}
    CHECK_THROWS_AS(space_from_json(bad), PreconditionError);

    bad = j;
    bad["carrier"] = 17u;
    CHECK_THROWS_AS(space_from_json(bad), ResourceCapError);

    CHECK_THROWS_AS(space_to_json(general_frame_powerset(make_chain(2))),
                    PreconditionError);
}
