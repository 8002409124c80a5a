#include "polarity/cli.hpp"
#include "polarity/dictionary.hpp"
#include "polarity/event_study.hpp"
#include "polarity/format.hpp"

#include "support/synthetic.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>

using namespace polarity;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "polarity");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

// Planted corpus on disk, built once for the whole test binary.
struct Workspace {
  synthetic::TempDir tmp{"cli"};
  synthetic::PlantedCorpus corpus;
  fs::path corpus_dir, responses, out_dir;

  Workspace() {
    synthetic::PlantedOptions opt;
    opt.n_documents = 300;
    opt.n_terms = 40;
    opt.n_planted = 4;
    opt.snr = 20;
    opt.min_length = 60;
    opt.max_length = 120;
    corpus = synthetic::planted_corpus(71, opt);
    corpus_dir = tmp.path() / "corpus";
    responses = tmp.path() / "responses.csv";
    out_dir = tmp.path() / "out";
    synthetic::write_corpus(corpus.documents, corpus_dir, responses);
  }
};

Workspace& ws() {
  static Workspace w;
  return w;
}

std::vector<std::string> build_args(const fs::path& out, const std::string& rule = "one_se") {
  auto& w = ws();
  return {"build",       "--corpus", w.corpus_dir.string(), "--responses", w.responses.string(), "--output",
          out.string(), "--grid-points", "40", "--rule", rule};
}

const Result& built() {
  static const Result r = run(build_args(ws().out_dir));
  return r;
}

}  // namespace

TEST_CASE("build writes the dictionary, report and manifest") {
  const auto& r = built();
  REQUIRE_MESSAGE(r.code == kExitOk, r.err);
  for (const char* f : {"dictionary.csv", "dictionary.json", "model_report.json", "manifest.json"})
    CHECK(fs::exists(ws().out_dir / f));
  const auto report = Json::parse(read_file(ws().out_dir / "model_report.json"));
  CHECK(report.contains("lambda_path"));
  CHECK(report.contains("vif"));
  const auto manifest = Json::parse(read_file(ws().out_dir / "manifest.json"));
  CHECK(manifest["config"]["lasso"]["selection_rule"] == "one_se");
  CHECK_FALSE(manifest["config"].contains("output_dir"));
  CHECK(manifest["inputs"]["corpus"]["n_documents"] == 300);
  CHECK(manifest["outputs"]["dictionary.csv"] == sha256_hex(read_file(ws().out_dir / "dictionary.csv")));
}

TEST_CASE("the planted corpus yields exactly the planted stems with their signs") {
  REQUIRE(built().code == kExitOk);
  const auto dict = load(ws().out_dir / "dictionary.csv");
  const auto& c = ws().corpus;
  std::set<std::string> got, want(c.planted.begin(), c.planted.end());
  for (const auto& e : dict.entries) got.insert(e.term);
  CHECK(got == want);
  for (std::size_t k = 0; k < c.planted.size(); ++k) {
    const auto* e = dict.find(c.planted[k]);
    REQUIRE(e);
    CHECK((e->coefficient > 0) == (c.coefficients[k] > 0));
  }
}

TEST_CASE("rerunning build gives byte-identical outputs") {
  REQUIRE(built().code == kExitOk);
  const auto again = ws().tmp.path() / "again";
  const auto r = run(build_args(again));
  REQUIRE(r.code == kExitOk);
  for (const char* f : {"dictionary.csv", "dictionary.json", "model_report.json", "manifest.json"})
    CHECK_MESSAGE(read_file(ws().out_dir / f) == read_file(again / f), f);
}

TEST_CASE("thread count does not change the outputs") {
  REQUIRE(built().code == kExitOk);
  const auto threaded = ws().tmp.path() / "threaded";
  ::setenv("POLARITY_THREADS", "3", 1);
  const auto r = run(build_args(threaded));
  ::unsetenv("POLARITY_THREADS");
  REQUIRE(r.code == kExitOk);
  for (const char* f : {"dictionary.csv", "model_report.json", "manifest.json"})
    CHECK_MESSAGE(read_file(ws().out_dir / f) == read_file(threaded / f), f);
  ::setenv("POLARITY_THREADS", "zero", 1);
  CHECK(run(build_args(ws().tmp.path() / "bad")).code == kExitUsage);
  ::unsetenv("POLARITY_THREADS");
}

TEST_CASE("a config file reproduces the flag-driven run") {
  REQUIRE(built().code == kExitOk);
  const auto manifest = Json::parse(read_file(ws().out_dir / "manifest.json"));
  Json cfg = manifest["config"];
  cfg["output_dir"] = "from_config";
  const auto path = ws().tmp.path() / "run.json";
  write_file(path, dump_canonical(cfg));
  const auto r = run({"build", "--config", path.string()});
  REQUIRE_MESSAGE(r.code == kExitOk, r.err);
  CHECK(read_file(ws().out_dir / "dictionary.csv") == read_file(ws().tmp.path() / "from_config" / "dictionary.csv"));
  CHECK(read_file(ws().out_dir / "manifest.json") == read_file(ws().tmp.path() / "from_config" / "manifest.json"));

  const auto round = run_config_from_json(run_config_to_json(load_run_config(path)));
  CHECK(run_config_to_json(round) == run_config_to_json(load_run_config(path)));

  write_file(path, "{\"corpus_pth\": \"x\"}");
  CHECK(run({"build", "--config", path.string()}).code == kExitUsage);
  write_file(path, "{not json");
  CHECK(run({"build", "--config", path.string()}).code == kExitUsage);
}

TEST_CASE("score reproduces the training fit and handles empty documents") {
  REQUIRE(built().code == kExitOk);
  auto& w = ws();
  const auto extra = w.tmp.path() / "extra";
  fs::create_directories(extra);
  write_file(extra / "empty.txt", "");
  write_file(extra / (w.corpus.documents[0].id + ".txt"), w.corpus.documents[0].text);
  const auto r = run({"score", "--dictionary", (w.out_dir / "dictionary.csv").string(), "--corpus", extra.string()});
  REQUIRE_MESSAGE(r.code == kExitOk, r.err);
  const auto dict = load(w.out_dir / "dictionary.csv");
  double offset_only = dict.metadata.intercept;
  for (const auto& e : dict.entries) offset_only -= e.coefficient * e.term_mean / e.term_sd;
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "doc_id,score,fitted");
  std::map<std::string, double> scores;
  while (std::getline(lines, line)) {
    const auto f = split_csv_line(line);
    REQUIRE(f.size() == 3);
    double v = 0;
    REQUIRE(parse_double(f[1], v));
    scores[f[0]] = v;
  }
  CHECK(scores.at("empty") == doctest::Approx(offset_only).epsilon(1e-12));

  // same score as in-process scoring
  const auto docs = tokenize_corpus({w.corpus.documents[0]}, dict.metadata.pipeline);
  CHECK(scores.at(w.corpus.documents[0].id) == doctest::Approx(score_document(dict, docs[0].terms()).score).epsilon(1e-12));

  const auto halves =
      run({"score", "--dictionary", (w.out_dir / "dictionary.csv").string(), "--corpus", extra.string(), "--halves"});
  REQUIRE(halves.code == kExitOk);
  CHECK(halves.out.rfind("doc_id,mu1,mu2,mu\n", 0) == 0);

  write_file(extra / "broken.txt", std::string("caf\xc3", 4));
  CHECK(run({"score", "--dictionary", (w.out_dir / "dictionary.csv").string(), "--corpus", extra.string()}).code ==
        kExitInput);
}

TEST_CASE("score refuses a config with a different pipeline") {
  REQUIRE(built().code == kExitOk);
  auto& w = ws();
  Json cfg = Json::parse(read_file(w.out_dir / "manifest.json"))["config"];
  cfg["pipeline"]["stemmer"] = "none";
  const auto path = w.tmp.path() / "nostem.json";
  write_file(path, dump_canonical(cfg));
  const auto r = run({"score", "--dictionary", (w.out_dir / "dictionary.csv").string(), "--corpus",
                      w.corpus_dir.string(), "--config", path.string()});
  CHECK(r.code == kExitInput);
  CHECK(r.err.find("stemmer") != std::string::npos);
}

TEST_CASE("compare prints one row per reference") {
  REQUIRE(built().code == kExitOk);
  auto& w = ws();
  const auto dict = load(w.out_dir / "dictionary.csv");
  std::string self = "term,value\n", other = "term,value\n";
  for (const auto& e : dict.entries) self += e.term + (e.coefficient > 0 ? ",1\n" : ",-1\n");
  other += w.corpus.vocabulary[0] + ",1\n" + w.corpus.planted[0] + ",-1\n";
  write_file(w.tmp.path() / "self.csv", self);
  write_file(w.tmp.path() / "other.csv", other);
  const auto json = w.tmp.path() / "compare.json";
  const auto r = run({"compare", "--dictionary", (w.out_dir / "dictionary.csv").string(),
                      (w.tmp.path() / "self.csv").string(), (w.tmp.path() / "other.csv").string(), "--json",
                      json.string()});
  REQUIRE_MESSAGE(r.code == kExitOk, r.err);
  const auto j = Json::parse(read_file(json));
  REQUIRE(j["rows"].size() == 2);
  const auto& row = j["rows"][0];
  CHECK(row["overlap_share"] == 1.0);
  CHECK(row["consensus_share"] == 1.0);
  CHECK(row["krippendorff_alpha"] == 1.0);

  write_file(w.tmp.path() / "empty.csv", "term,value\n");
  CHECK(run({"compare", "--dictionary", (w.out_dir / "dictionary.csv").string(),
             (w.tmp.path() / "empty.csv").string()})
            .code == kExitInput);
  write_file(w.tmp.path() / "bad.csv", "good,1\ngood\n");
  const auto bad = run({"compare", "--dictionary", (w.out_dir / "dictionary.csv").string(),
                        (w.tmp.path() / "bad.csv").string()});
  CHECK(bad.code == kExitInput);
  CHECK(bad.err.find("bad.csv:2") != std::string::npos);
}

TEST_CASE("placement hypothesis on a corpus with negative words late") {
  synthetic::TempDir tmp("cli-placement");
  const auto pc = synthetic::placement_corpus(72, 400);
  synthetic::write_corpus(pc.documents, tmp.path() / "corpus", tmp.path() / "y.csv");
  const auto b = run({"build", "--corpus", (tmp.path() / "corpus").string(), "--responses",
                      (tmp.path() / "y.csv").string(), "--output", (tmp.path() / "out").string(), "--grid-points",
                      "40"});
  REQUIRE_MESSAGE(b.code == kExitOk, b.err);
  const std::vector<std::string> args = {"hypothesis", "placement", "--dictionary",
                                         (tmp.path() / "out" / "dictionary.csv").string(), "--corpus",
                                         (tmp.path() / "corpus").string(), "--responses",
                                         (tmp.path() / "y.csv").string(), "--alternative", "greater"};
  const auto r = run(args);
  REQUIRE_MESSAGE(r.code == kExitOk, r.err);
  const auto j = Json::parse(r.out);
  CHECK(j["welch"]["t_statistic"].get<double>() > 0);
  CHECK(j["welch"]["p_value"].get<double>() < 0.001);
  CHECK(j["panels"].size() == 3);
  CHECK(run(args).out == r.out);

  // joint-f: a reference with the positive words leaves the negative ones to test
  std::string ref = "term,value\n";
  for (const auto& w : pc.positive) ref += w + ",1\n";
  write_file(tmp.path() / "pos.csv", ref);
  auto jf = args;
  jf[1] = "joint-f";
  jf.resize(8);
  const auto no_ref = run(jf);
  CHECK(no_ref.code == kExitUsage);
  jf.push_back("--reference");
  jf.push_back((tmp.path() / "pos.csv").string());
  const auto f = run(jf);
  REQUIRE_MESSAGE(f.code == kExitOk, f.err);
  const auto fj = Json::parse(f.out);
  CHECK(fj["df_numerator"].get<int>() >= 1);
  CHECK(fj["p_value"].get<double>() < 0.001);

  // a reference covering every term leaves nothing to test
  std::string all = "term,value\n";
  for (const auto& e : load(tmp.path() / "out" / "dictionary.csv").entries) all += e.term + ",1\n";
  write_file(tmp.path() / "all.csv", all);
  jf.back() = (tmp.path() / "all.csv").string();
  CHECK(run(jf).code == kExitUsage);
}

TEST_CASE("event-study output feeds build") {
  synthetic::TempDir tmp("cli-events");
  std::string market = "date,price\n", stock = "date,price\n";
  double pm = 100, ps = 50;
  std::mt19937_64 rng(73);
  std::normal_distribution<double> z(0, 0.01);
  const auto start = std::chrono::sys_days{std::chrono::year{2016} / 1 / 4};
  for (int i = 0; i < 40; ++i) {
    const auto d = format_date(start + std::chrono::days{i});
    market += d + "," + format_double(pm) + "\n";
    stock += d + "," + format_double(ps) + "\n";
    const double rm = z(rng);
    pm *= 1 + rm;
    ps *= 1 + 0.001 + 1.2 * rm + (i == 24 ? 0.04 : 0.0);
  }
  fs::create_directories(tmp.path() / "prices");
  write_file(tmp.path() / "market.csv", market);
  write_file(tmp.path() / "prices" / "ACME.csv", stock);
  write_file(tmp.path() / "events.csv",
             "doc_id,instrument_id,event_date,word_count,price\nf1,ACME,2016-01-29,500,50\nf2,ACME,2016-02-05,50,50\n");
  const std::vector<std::string> args = {"event-study", "--prices", (tmp.path() / "prices").string(), "--market",
                                         (tmp.path() / "market.csv").string(), "--events",
                                         (tmp.path() / "events.csv").string()};
  const auto r = run(args);
  REQUIRE_MESSAGE(r.code == kExitOk, r.err);
  std::istringstream lines(r.out);
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  CHECK(header == "doc_id,abnormal_return");
  const auto f = split_csv_line(row);
  REQUIRE(f.size() == 2);
  double ar = 0;
  REQUIRE(parse_double(f[1], ar));
  CHECK(std::abs(ar - 0.04) < 1e-12);
  CHECK(r.err.find("1 of 2") != std::string::npos);

  auto filtered = args;
  filtered.insert(filtered.end(), {"--min-words", "100000"});
  const auto none = run(filtered);
  CHECK(none.code == kExitOk);
  CHECK(none.out == "doc_id,abnormal_return\n");
  CHECK(none.err.find("warning") != std::string::npos);

  auto missing = args;
  missing[4] = (tmp.path() / "nope.csv").string();
  CHECK(run(missing).code == kExitInput);
}

TEST_CASE("input errors map to exit code 3") {
  synthetic::TempDir tmp("cli-errors");
  fs::create_directories(tmp.path() / "empty");
  write_file(tmp.path() / "y.csv", "doc_id,value\n");
  const auto empty = run({"build", "--corpus", (tmp.path() / "empty").string(), "--responses",
                          (tmp.path() / "y.csv").string(), "--output", (tmp.path() / "o").string()});
  CHECK(empty.code == kExitInput);

  fs::create_directories(tmp.path() / "c");
  write_file(tmp.path() / "c" / "a.txt", "gain");
  write_file(tmp.path() / "c" / "b.txt", "loss");
  write_file(tmp.path() / "c" / "c.txt", "flat");
  write_file(tmp.path() / "y.csv", "doc_id,value\na,1\n");
  const auto missing = run({"build", "--corpus", (tmp.path() / "c").string(), "--responses",
                            (tmp.path() / "y.csv").string(), "--output", (tmp.path() / "o").string()});
  CHECK(missing.code == kExitInput);
  CHECK(missing.err.find("b") != std::string::npos);
  CHECK(missing.err.find("c") != std::string::npos);

  write_file(tmp.path() / "y.csv", "doc_id,value\na,1\nb,high\nc,0\n");
  const auto parse = run({"build", "--corpus", (tmp.path() / "c").string(), "--responses",
                          (tmp.path() / "y.csv").string(), "--output", (tmp.path() / "o").string()});
  CHECK(parse.code == kExitInput);
  CHECK(parse.err.find("y.csv:3") != std::string::npos);
}

TEST_CASE("usage errors map to exit code 2") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({"build"}).code == kExitUsage);
  CHECK(run({"build", "--corpus", "x", "--responses", "y", "--output", "z", "--folds", "1"}).code == kExitUsage);
  CHECK(run({"build", "--corpus", "x", "--responses", "y", "--output", "z", "--rule", "best"}).code == kExitUsage);
  CHECK(run({"score", "--corpus", "x"}).code == kExitUsage);
  const auto help = run({"--help"});
  CHECK(help.code == kExitOk);
  CHECK(help.out.find("build") != std::string::npos);
  const auto build_help = run({"build", "--help"});
  CHECK(build_help.code == kExitOk);
  CHECK(build_help.out.find("--dump-dtm") != std::string::npos);
}

TEST_CASE("strict mode turns non-convergence into exit code 4") {
  REQUIRE(built().code == kExitOk);
  auto args = build_args(ws().tmp.path() / "strict");
  args.insert(args.end(), {"--max-iter", "1", "--tol", "1e-15"});
  const auto lenient = run(args);
  CHECK(lenient.code == kExitOk);
  CHECK(lenient.err.find("did not converge") != std::string::npos);
  args.push_back("--strict");
  CHECK(run(args).code == kExitNumerical);
}

TEST_CASE("dump-dtm writes the weighted matrix") {
  REQUIRE(built().code == kExitOk);
  auto args = build_args(ws().tmp.path() / "dtm");
  args.push_back("--dump-dtm");
  REQUIRE(run(args).code == kExitOk);
  const auto body = read_file(ws().tmp.path() / "dtm" / "dtm.csv");
  CHECK(body.rfind("doc_id,term,weight\n", 0) == 0);
  const auto manifest = Json::parse(read_file(ws().tmp.path() / "dtm" / "manifest.json"));
  CHECK(manifest["outputs"].contains("dtm.csv"));
}
