#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qcausal/io.hpp"
#include "qcausal/random.hpp"
#include "qcausal/scenario.hpp"

using namespace qcausal;
using namespace qcausal::cli;

namespace {

json cfg(json body) {
  body["version"] = 1;
  return body;
}

std::string config_error(const std::string& command, const json& c) {
  try {
    run_command(command, c);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::filesystem::path temp_file(const std::string& name, const std::string& text) {
  const auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << text;
  return p;
}

int run_tool(const std::string& args) {
  const std::string cmd = std::string(QCAUSAL_BIN) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string scenario(const std::string& name) { return std::string(QCAUSAL_SCENARIOS) + "/" + name; }

}  // namespace

TEST(Json, OperatorRoundTripIsExact) {
  Sampler s(0);
  const Operator op = s.hermitian(5);
  const Operator back = io::operator_from_json(json::parse(io::to_json(op).dump()));
  EXPECT_EQ(back.matrix(), op.matrix());
  const StateVector psi = s.unit_vector(4);
  EXPECT_EQ(io::state_from_json(json::parse(io::to_json(psi).dump())).amplitudes(), psi.amplitudes());
}

TEST(Json, OperatorSchemaErrors) {
  EXPECT_THROW(io::operator_from_json(json{{"dim", 2}, {"re", {1, 0, 0}}}), ValidationError);
  EXPECT_THROW(io::operator_from_json(json{{"dim", 2}, {"re", {1, 0, 0, 1}}, {"extra", 1}}), ValidationError);
  EXPECT_THROW(io::operator_from_json(json{{"re", {1}}}), ValidationError);
}

TEST(Probabilities, QubitZXPreset) {
  const auto r = run_command("probabilities", cfg({{"preset", "qubit-zx"}}));
  EXPECT_TRUE(r.ok);
  const auto& out = r.outputs;
  const auto& outcomes = out.at("joint").at("outcomes");
  ASSERT_EQ(outcomes.size(), 4u);
  const double expect[4] = {0.5, 0.5, 0.0, 0.0};
  for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(outcomes[k].at("p").get<double>(), expect[k], 1e-14);
  EXPECT_NEAR(out.at("pre_conditioning").at("table")[0][0].get<double>(), 0.5, 1e-14);
  EXPECT_TRUE(out.at("pre_conditioning").at("table")[1][0].is_null());
  EXPECT_NEAR(out.at("post_conditioning").at("table")[0][0].get<double>(), 1.0, 1e-14);
  EXPECT_NEAR(out.at("normalization").at("joint_total").get<double>(), 1.0, 1e-12);
}

TEST(Probabilities, RepeatZIsDiagonal) {
  const auto r = run_command("probabilities", cfg({{"preset", "repeat-z"}}));
  const auto& outcomes = r.outputs.at("joint").at("outcomes");
  for (const auto& o : outcomes) {
    const auto idx = o.at("indices").get<std::vector<std::size_t>>();
    EXPECT_NEAR(o.at("p").get<double>(), idx[0] == idx[1] ? 0.5 : 0.0, 1e-14);
  }
}

TEST(Probabilities, ExplicitMatrices) {
  json b;
  b["projectors"] = json::array({io::to_json(Operator::outer(Vector{{1, 0}})),
                                 io::to_json(Operator::outer(Vector{{0, 1}}))});
  json c = cfg({{"A", "sigma_z"}});
  c["state"] = {{"dim", 2}, {"re", {0.6, 0.8}}};
  c["B"] = b;
  const auto r = run_command("probabilities", c);
  EXPECT_NEAR(r.outputs.at("joint").at("outcomes")[0].at("p").get<double>(), 0.36, 1e-14);
}

TEST(Probabilities, MissingObservableNamesField) {
  const std::string what = config_error("probabilities", cfg({{"state", "zero"}, {"A", "sigma_z"}}));
  EXPECT_NE(what.find("'B'"), std::string::npos) << what;
}

TEST(Config, SchemaViolations) {
  EXPECT_NE(config_error("onset", json{{"v", 0.5}, {"L", 1.0}}).find("version"), std::string::npos);
  EXPECT_NE(config_error("onset", json{{"version", 2}, {"v", 0.5}, {"L", 1.0}}).find("version"), std::string::npos);
  EXPECT_NE(config_error("onset", cfg({{"v", 0.5}, {"L", 1.0}, {"speed", 2}})).find("'speed'"), std::string::npos);
  EXPECT_NE(config_error("onset", cfg({{"v", 1.5}, {"L", 1.0}})).find("'v'"), std::string::npos);
  EXPECT_NE(config_error("probabilities", cfg({{"state", "zero"}, {"A", "sigma_q"}, {"B", "sigma_z"}})).find("sigma_q"),
            std::string::npos);
  EXPECT_NE(config_error("probabilities", cfg({{"state", "zero"}, {"A", "fourier-qutrit"}, {"B", "sigma_z"}}))
                .find("dimension"),
            std::string::npos);
  EXPECT_NE(config_error("verify-b", cfg({{"family", "magic"}})).find("magic"), std::string::npos);
  EXPECT_NE(config_error("contextuality", cfg({{"preset", "qutrit"}, {"mode", "sideways"}})).find("'mode'"),
            std::string::npos);
  EXPECT_FALSE(config_error("frobnicate", cfg({})).empty());
}

TEST(Config, ParseErrorsCarryLine) {
  try {
    parse_config("{\n  \"version\": 1,\n  \"v\": ,\n}");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(Contextuality, Presets) {
  const auto q = run_command("contextuality", cfg({{"preset", "qutrit"}}));
  EXPECT_NEAR(q.outputs.at("probe").at("delta").get<double>(), 0.1333333333333333, 1e-9);
  const auto c = run_command("contextuality", cfg({{"preset", "commuting"}}));
  EXPECT_LT(std::abs(c.outputs.at("probe").at("delta").get<double>()), 1e-12);
  const auto p = run_command("contextuality", cfg({{"preset", "qutrit"}, {"mode", "pre"}}));
  EXPECT_EQ(p.outputs.at("probe").at("delta").get<double>(), 0.0);
  EXPECT_FALSE(config_error("contextuality",
                            cfg({{"state", "qutrit-uniform"}, {"earlier", "computational-qutrit"},
                                 {"later", "fourier-qutrit"}, {"coarsening", {{0, 1}}}, {"i", 0}, {"j", 0}}))
                   .empty());
}

TEST(Signaling, DefaultLinearAndZeroTime) {
  const auto d = run_command("signaling", cfg({{"t", 0.5}}));
  EXPECT_NEAR(d.outputs.at("signal").at("delta").get<double>(), std::tanh(1.0), 1e-6);
  const auto z = run_command("signaling", cfg({{"t", 0.0}}));
  EXPECT_EQ(z.outputs.at("signal").at("delta").get<double>(), 0.0);
  const auto l = run_command("signaling", cfg({{"law", "linear"}, {"t", 0.5}}));
  EXPECT_TRUE(l.ok);
  EXPECT_LT(std::abs(l.outputs.at("signal").at("delta").get<double>()), 1e-10);
  const std::string csv = signaling_csv(d);
  EXPECT_EQ(csv.rfind("t,first_choice,second_choice,delta\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 12);
}

TEST(Onset, Values) {
  EXPECT_EQ(run_command("onset", cfg({{"v", 0.0}, {"L", 3.0}})).outputs.at("onset").at("discrepancy").get<double>(), 0.0);
  EXPECT_NEAR(run_command("onset", cfg({{"v", 0.5}, {"L", 10.0}, {"eps", 0.01}}))
                  .outputs.at("onset").at("discrepancy").get<double>(),
              5.0, 1e-12);
  EXPECT_NEAR(run_command("onset", cfg({{"v", 0.9}, {"L", 1.0}})).outputs.at("onset").at("discrepancy").get<double>(),
              0.9, 1e-12);
}

TEST(VerifyB, IdentityAndControls) {
  const auto id = run_command("verify-b", cfg({{"family", "identity"}}));
  EXPECT_TRUE(id.ok);
  for (const auto& r : id.outputs.at("reports")) EXPECT_EQ(r.at("max_residual").get<double>(), 0.0);
  const auto gc = run_command("verify-b", cfg({{"family", "global-coupled"}, {"samples", 50}}));
  EXPECT_FALSE(gc.ok);
  EXPECT_FALSE(gc.outputs.at("reports")[0].at("pass").get<bool>());
  EXPECT_TRUE(gc.outputs.at("reports")[1].at("pass").get<bool>());
}

TEST(Gauge, Maps) {
  EXPECT_EQ(run_command("gauge", cfg({{"map", "identity"}})).outputs.at("gauge").at("max_discrepancy").get<double>(), 0.0);
  EXPECT_TRUE(run_command("gauge", cfg({{"map", "nonlinear-phase"}})).ok);
  const auto b = run_command("gauge", cfg({{"map", "broken"}}));
  EXPECT_FALSE(b.ok);
  EXPECT_GT(b.outputs.at("gauge").at("max_discrepancy").get<double>(), 1e-3);
}

TEST(Report, ByteIdenticalAndSeeded) {
  const json c = cfg({{"family", "local-twist"}, {"samples", 20}});
  const std::string a = run_command("verify-b", c).to_json().dump(2);
  const std::string b = run_command("verify-b", c).to_json().dump(2);
  EXPECT_EQ(a, b);
  const auto r0 = run_command("verify-b", c);
  const auto r5 = run_command("verify-b", c, 5);
  EXPECT_NE(r0.inputs_digest, r5.inputs_digest);
  EXPECT_NE(r0.outputs.at("reports")[0].at("max_residual"), r5.outputs.at("reports")[0].at("max_residual"));
  EXPECT_FALSE(run_command("onset", cfg({{"v", 0.1}, {"L", 1.0}})).to_json().contains("timing_ms"));
  EXPECT_EQ(r0.inputs_digest.rfind("fnv1a64:", 0), 0u);
}

TEST(Tool, ExitStatusContract) {
  EXPECT_EQ(run_tool("probabilities --config " + scenario("probabilities_qubit_zx.json")), 0);
  EXPECT_EQ(run_tool("verify-b --config " + scenario("verify_b_identity.json")), 0);
  EXPECT_EQ(run_tool("gauge --config " + scenario("gauge_broken.json")), 1);
  EXPECT_EQ(run_tool("verify-b --config " + scenario("verify_b_step-phase.json")), 1);
  const auto missing = temp_file("qcausal_missing_b.json", R"({"version": 1, "state": "zero", "A": "sigma_z"})");
  EXPECT_EQ(run_tool("probabilities --config " + missing.string()), 2);
  const auto broken = temp_file("qcausal_broken.json", "{\"version\": 1,");
  EXPECT_EQ(run_tool("onset --config " + broken.string()), 2);
  EXPECT_EQ(run_tool("onset --config /nonexistent/file.json"), 2);
  EXPECT_EQ(run_tool("onset"), 2);
  EXPECT_EQ(run_tool("no-such-command --config x"), 2);
}

TEST(Tool, OutputFilesAndDeterminism) {
  const auto dir = std::filesystem::temp_directory_path();
  const auto out1 = dir / "qcausal_sig1.json", out2 = dir / "qcausal_sig2.json", csv = dir / "qcausal_sig.csv";
  ASSERT_EQ(run_tool("signaling --config " + scenario("signaling_default.json") + " --out " + out1.string() +
                     " --csv " + csv.string()),
            0);
  ASSERT_EQ(run_tool("signaling --config " + scenario("signaling_default.json") + " --out " + out2.string()), 0);
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  EXPECT_EQ(slurp(out1), slurp(out2));
  EXPECT_NE(slurp(csv).find("0.5,0,0.76159415595575"), std::string::npos);
}
