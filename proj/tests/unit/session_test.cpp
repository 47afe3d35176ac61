#include "empathic/error.hpp"
#include "empathic/session/store.hpp"
#include "empathic/session/workflow.hpp"
#include "fixtures/worked.hpp"
#include "helpers.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace empathic;
using namespace empathic::session;

namespace {

Clock fixed_clock() {
    return [] { return std::string("2024-05-21T00:00:00Z"); };
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    return json::parse(in);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
}

// Worked example carried through check, relations, two selections, an import and welfare.
Session worked_session() {
    Session s = Workflow::import_problem("worked", read_json(testutil::data_file("worked_session.json")), {}, fixed_clock());
    Workflow wf(s, fixed_clock(), 1);
    wf.check();
    wf.relations();
    selection::TargetSpec sparse;
    sparse.kind = selection::TargetKind::Sparse;
    wf.select(sparse);
    selection::TargetSpec bus;
    bus.kind = selection::TargetKind::Bus;
    wf.select(bus);
    wf.import_network("w6", worked::matrix(worked::w6()), true);
    wf.welfare();
    return s;
}

}  // namespace

TEST(Workflow, WorkedExamplePhasesAndResults) {
    const Session s = worked_session();
    EXPECT_EQ(s.phase, Phase::Resolved);
    ASSERT_TRUE(s.feasibility);
    EXPECT_NEAR(s.feasibility->eps_star, 0.1840, 1e-3);
    ASSERT_TRUE(s.relations);
    EXPECT_EQ(s.relations->at(1, 2).cls, relations::RelationClass::Necessary);
    EXPECT_EQ(s.networks.size(), 3u);
    EXPECT_NEAR(s.networks.at("sparse").objective, 11.0, 1e-9);
    EXPECT_TRUE(s.networks.at("w6").g.has_value());
    ASSERT_TRUE(s.welfare);
    EXPECT_EQ(s.welfare->rows.front().label, "without network");
    EXPECT_EQ(s.welfare->rows.size(), 4u);
    for (std::size_t k = 0; k < s.events.size(); ++k) EXPECT_EQ(s.events[k].seq, static_cast<std::int64_t>(k + 1));
}

TEST(Workflow, JudgmentPipelineFromScratch) {
    const auto problem = read_json(testutil::data_file("worked_judgments.json"));
    Session s = Workflow::import_problem("judg", problem, {}, fixed_clock());
    EXPECT_EQ(s.phase, Phase::IntrinsicElicitation);
    Workflow wf(s, fixed_clock());
    EXPECT_THROW(wf.system(), ConflictError);
    const auto out = wf.complete_judgments();
    EXPECT_TRUE(out.all_completed());
    const auto& u = wf.compute_intrinsic();
    EXPECT_EQ(s.phase, Phase::EmpathicElicitation);
    // Nine of ten rows follow the printed utilities; expert 2's completion is a tied optimum.
    const auto printed = worked::intrinsic();
    for (int j = 0; j < 10; ++j)
        if (j != 1) EXPECT_LT((u.matrix().row(j) - printed.matrix().row(j)).cwiseAbs().maxCoeff(), 2e-3) << j;
    EXPECT_THROW(wf.set_judgment(0, worked::completed_matrices()[0]), ConflictError);
    EXPECT_THROW(wf.compute_intrinsic(), ConflictError);
}

TEST(Workflow, GatesAndValidation) {
    Session s = Workflow::import_problem("g", read_json(testutil::data_file("worked_session.json")), {}, fixed_clock());
    Workflow wf(s, fixed_clock());
    try {
        wf.relations();
        FAIL();
    } catch (const ConflictError& e) {
        EXPECT_NE(std::string(e.what()).find("run check first"), std::string::npos);
    }
    constraints::EmpathicStatement bad;
    bad.id = "x";
    bad.kind = constraints::StatementKind::ArcPresent;
    bad.i = 0;
    bad.j = 10;
    EXPECT_THROW(wf.add_statements({bad}), ValidationError);
    bad.j = 1;
    bad.id = "a";
    EXPECT_THROW(wf.add_statements({bad}), ValidationError);
    EXPECT_THROW(wf.welfare({"nope"}), NotFoundError);
}

TEST(Workflow, InconsistencyResolutionLoop) {
    Session s = Workflow::import_problem("r", read_json(testutil::data_file("worked_session.json")), {}, fixed_clock());
    Workflow wf(s, fixed_clock());
    constraints::EmpathicStatement z;
    z.id = "z";
    z.kind = constraints::StatementKind::ZeroWeight;
    z.i = 1;
    z.j = 2;
    wf.add_statements({z});
    const auto out = wf.check();
    EXPECT_FALSE(out.consistent());
    ASSERT_TRUE(out.report);
    ASSERT_EQ(out.report->sets.size(), 2u);
    EXPECT_EQ(s.phase, Phase::EmpathicElicitation);
    EXPECT_THROW(wf.relations(), ConflictError);
    EXPECT_THROW(wf.resolve(3), ValidationError);
    const auto fixed = wf.resolve(2);
    EXPECT_TRUE(fixed.consistent());
    EXPECT_EQ(s.phase, Phase::Resolved);
    EXPECT_EQ(s.resolutions.size(), 1u);
    EXPECT_EQ(s.statements.size(), 6u);
}

TEST(Store, RoundTripIsByteIdentical) {
    testutil::TempDir tmp;
    const Session s = worked_session();
    save_dir(tmp.path() / "a", s);
    const Session loaded = load_dir(tmp.path() / "a");
    EXPECT_EQ(canonical(loaded), canonical(s));
    save_dir(tmp.path() / "b", loaded);
    EXPECT_EQ(slurp(tmp.path() / "a" / "session.json"), slurp(tmp.path() / "b" / "session.json"));
    EXPECT_EQ(slurp(tmp.path() / "a" / "events.ndjson"), slurp(tmp.path() / "b" / "events.ndjson"));
    save_dir(tmp.path() / "a", s);
    save_dir(tmp.path() / "a", s);
    EXPECT_EQ(slurp(tmp.path() / "a" / "session.json"), slurp(tmp.path() / "b" / "session.json"));
}

TEST(Store, ReplayReproducesState) {
    const Session s = worked_session();
    const Session r = replay(s.events);
    EXPECT_EQ(canonical(r), canonical(s));
    std::vector<Event> reparsed;
    for (const auto& e : s.events) reparsed.push_back(event_from_json(json::parse(event_to_json(e).dump())));
    EXPECT_EQ(canonical(replay(reparsed)), canonical(s));
}

TEST(Store, CorruptFilesAreDetected) {
    testutil::TempDir tmp;
    const Session s = worked_session();
    const fs::path dir = tmp.path() / "s";
    save_dir(dir, s);
    const std::string good = slurp(dir / "session.json");

    spit(dir / "session.json", good.substr(0, good.size() / 2));
    EXPECT_THROW(load_dir(dir), CorruptError);

    auto doc = json::parse(good);
    doc["state"]["thresholds"]["eps_prime"] = 0.02;
    spit(dir / "session.json", doc.dump(2) + "\n");
    try {
        load_dir(dir);
        FAIL();
    } catch (const CorruptError& e) {
        EXPECT_NE(std::string(e.what()).find("checksum"), std::string::npos);
    }

    doc = json::parse(good);
    doc["format_version"] = 99;
    spit(dir / "session.json", doc.dump(2) + "\n");
    EXPECT_THROW(load_dir(dir), CorruptError);

    spit(dir / "session.json", good);
    spit(dir / "events.ndjson", "{\"seq\": 1,");
    EXPECT_THROW(load_dir(dir), CorruptError);

    EXPECT_THROW(load_dir(tmp.path() / "missing"), NotFoundError);
}

TEST(Store, PhaseCannotMoveBackward) {
    Session s = worked_session();
    Event e;
    e.seq = static_cast<std::int64_t>(s.events.size()) + 1;
    e.type = "intrinsic_set";
    e.payload = {{"intrinsic", json::parse(state_to_json(s).at("intrinsic").dump())}};
    apply(s, e);
    EXPECT_EQ(s.phase, Phase::Resolved);
    EXPECT_FALSE(s.feasibility.has_value());

    Event unknown;
    unknown.type = "teleported";
    EXPECT_THROW(apply(s, unknown), ValidationError);
}

TEST(Store, LockIsExclusive) {
    testutil::TempDir tmp;
    {
        SessionLock first(tmp.path());
        EXPECT_THROW(SessionLock second(tmp.path()), ConflictError);
    }
    EXPECT_NO_THROW(SessionLock again(tmp.path()));
}

TEST(Store, ListAndIds) {
    testutil::TempDir tmp;
    SessionStore store(tmp.path());
    const Panel panel{3, 2, {"x", "y", "z"}, {"p", "q"}};
    store.save(Workflow::create("beta", panel, {}, fixed_clock()));
    store.save(Workflow::create("alpha", panel, {}, fixed_clock()));
    fs::create_directories(tmp.path() / "broken");
    spit(tmp.path() / "broken" / "session.json", "{");
    const auto list = store.list();
    ASSERT_EQ(list.size(), 2u);
    EXPECT_EQ(list[0].id, "alpha");
    EXPECT_EQ(list[1].id, "beta");
    EXPECT_EQ(list[0].n, 3);
    EXPECT_EQ(list[0].events, 1u);
    EXPECT_TRUE(store.exists("alpha"));
    EXPECT_FALSE(store.exists("gamma"));
    EXPECT_THROW(store.load("gamma"), NotFoundError);
    EXPECT_THROW(store.load("../etc"), NotFoundError);
    EXPECT_TRUE(valid_session_id("a_b-9"));
    EXPECT_FALSE(valid_session_id("a/b"));
    EXPECT_FALSE(valid_session_id(std::string(65, 'a')));
    EXPECT_THROW(Workflow::create("bad", Panel{1, 2, {"x"}, {"p", "q"}}, {}, fixed_clock()), ValidationError);
}
