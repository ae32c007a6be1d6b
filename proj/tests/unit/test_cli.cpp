// Black-box tests of the lteu-sim executable.

#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

struct Outcome
{
  int status = -1;
  std::string out;
};

Outcome
run(const std::string& args)
{
  const std::string cmd = std::string("\"") + LTEU_SIM_PATH + "\" " + args + " 2>/dev/null";
  Outcome o;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0)
    {
      o.out.append(buf.data(), n);
    }
  const int raw = ::pclose(pipe);
  o.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return o;
}

int
status_with_stderr(const std::string& args, std::string& err)
{
  const auto path = std::filesystem::temp_directory_path() / "lteu_cli_stderr.txt";
  const std::string cmd = std::string("\"") + LTEU_SIM_PATH + "\" " + args + " >/dev/null 2>\"" + path.string() + "\"";
  const int raw = std::system(cmd.c_str());
  std::ifstream in(path);
  err.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  std::filesystem::remove(path);
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::filesystem::path
write_temp(const std::string& name, const std::string& text)
{
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path;
}

const std::string handoff_vector =
  "fuzzy --input sinr=3 --input velocity=5 --input auth=1 --input latency=rt --input battery=8 --input load=10";

} // namespace

TEST_CASE("usage errors exit with 2")
{
  std::string err;
  CHECK(status_with_stderr("run", err) == 2);
  CHECK(err.find("config") != std::string::npos);
  CHECK(run("").status == 2);
  CHECK(run("run --bogus").status == 2);
  CHECK(run("teleport").status == 2);
  CHECK(run("fuzzy --input sinr=3").status == 2);
  CHECK(run("fuzzy --input nonsense").status == 2);
}

TEST_CASE("runtime errors exit with 1")
{
  const auto bad = write_temp("lteu_bad.ini", "[general]\n[radio]\ncell_radius_m = -5\n");
  std::string err;
  CHECK(status_with_stderr("run -c \"" + bad.string() + "\"", err) == 1);
  CHECK(err.find("line 3") != std::string::npos);
  std::filesystem::remove(bad);
}

TEST_CASE("grid with one macro site")
{
  const auto o = run("grid --n-macro 1");
  CHECK(o.status == 0);
  CHECK(o.out == "x_m,y_m\n0.0000,0.0000\n");
}

TEST_CASE("fuzzy prints the decision value")
{
  const auto o = run(handoff_vector);
  CHECK(o.status == 0);
  const double v = std::stod(o.out);
  CHECK(v > 0.8);
  CHECK(v <= 1.0);
  CHECK(o.out.ends_with("\n"));
}

TEST_CASE("run writes a deterministic event log")
{
  const auto cfg = write_temp("lteu_small.ini", "[general]\nseed = 3\nsim_time_s = 5\nn_ues = 4\n");
  const auto out1 = std::filesystem::temp_directory_path() / "lteu_run1.csv";
  const auto out2 = std::filesystem::temp_directory_path() / "lteu_run2.csv";
  CHECK(run("run -c \"" + cfg.string() + "\" -o \"" + out1.string() + "\"").status == 0);
  CHECK(run("run -c \"" + cfg.string() + "\" --set general.n_ues=4 -o \"" + out2.string() + "\"").status == 0);
  std::ifstream a(out1), b(out2);
  const std::string ta((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
  const std::string tb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
  CHECK(ta.starts_with("t_s,ue_id,event,serving,target,sinr_serving_db,sinr_target_db,decision_value,verdict\n"));
  CHECK(ta.size() > 100);
  CHECK(ta == tb);

  const auto stdout_run = run("run -c \"" + cfg.string() + "\"");
  CHECK(stdout_run.status == 0);
  CHECK(stdout_run.out == ta);

  const auto other = run("run -c \"" + cfg.string() + "\" --seed 4");
  CHECK(other.status == 0);
  CHECK(other.out != ta);

  CHECK(run("run -c \"" + cfg.string() + "\" --set handover.nope=1").status == 1);
  for (const auto& p : {cfg, out1, out2})
    {
      std::filesystem::remove(p);
    }
}

TEST_CASE("coexist prints one row per node and seed")
{
  const auto cfg = write_temp("lteu_coexist.ini",
                              "[general]\nseed = 1\n[coexist]\nn_slots = 2000\nmode = lbt\nnodes = lteu_gw, wifi\nseeds = 2\n");
  const auto o = run("coexist -c \"" + cfg.string() + "\"");
  CHECK(o.status == 0);
  CHECK(std::count(o.out.begin(), o.out.end(), '\n') == 5);
  CHECK(o.out.starts_with("mode,seed,node_id,tech,slots_won,standalone_slots_won,utilization\nlbt,1,0,lteu_gw,"));
  std::filesystem::remove(cfg);
}
