// Command-line front end: corpus -> similarity table -> graph -> attacks,
// with every run writing a metadata record sufficient to reproduce it.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "linklab/corpus.hpp"
#include "linklab/fingerprint.hpp"
#include "linklab/graphmatch.hpp"
#include "linklab/io.hpp"
#include "linklab/pseudonym.hpp"
#include "linklab/simgraph.hpp"
#include "linklab/simtable.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string timestamp_label() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y%m%d-%H%M%S", &tm);
  return buf;
}

// Per-run output directory <out>/<command>-<label>/ plus its meta.json.
struct Run {
  fs::path dir;
  json meta;

  Run(const std::string& out, const std::string& command, const std::string& label) {
    dir = fs::path(out) / (command + "-" + (label.empty() ? timestamp_label() : label));
    fs::create_directories(dir);
    meta["command"] = command;
  }

  void record_input(const std::string& key, const fs::path& path) {
    meta["inputs"][key] = {{"path", path.string()},
                           {"sha256", linklab::io::file_sha256_hex(path)}};
  }

  void finish() { linklab::io::write_file(dir / "meta.json", meta.dump(2) + "\n"); }
};

struct CostModelFlags {
  linklab::simtable::CostModel model;

  void attach(CLI::App* cmd) {
    cmd->add_option("--cost-substitute", model.substitute, "substitution cost");
    cmd->add_option("--cost-insert", model.insert, "insertion cost");
    cmd->add_option("--cost-delete", model.del, "deletion cost");
    cmd->add_option("--cost-transpose", model.transpose, "adjacent transposition cost");
    cmd->add_option("--first-char-multiplier", model.first_char_multiplier,
                    "multiplier for edits touching the first character");
  }

  json to_json() const {
    return {{"substitute", model.substitute},
            {"insert", model.insert},
            {"delete", model.del},
            {"transpose", model.transpose},
            {"first_char_multiplier", model.first_char_multiplier}};
  }
};

struct KeyFlags {
  std::string key_hex;
  std::string key_file;
  int gen_bits = -1;
  std::string key_out;

  void attach(CLI::App* cmd) {
    cmd->add_option("--hmac-key-hex", key_hex, "MAC key as hex");
    cmd->add_option("--hmac-key-file", key_file, "file holding the MAC key as hex");
    cmd->add_option("--gen-key-bits", gen_bits, "generate a fresh key with this many entropy bits")
        ->check(CLI::Range(0, 256));
    cmd->add_option("--key-out", key_out, "write a generated key (hex) to this file");
  }

  // Resolves to a key, or nullopt when no key flag was given. Keys are never
  // logged; a generated key is persisted only when --key-out names a file.
  std::optional<linklab::pseudonym::MacKey> resolve(std::optional<std::uint64_t> seed) const {
    using linklab::pseudonym::MacKey;
    if (!key_hex.empty()) return MacKey::from_hex(key_hex);
    if (!key_file.empty()) {
      std::string hex = linklab::io::read_file(key_file);
      while (!hex.empty() && (hex.back() == '\n' || hex.back() == '\r')) hex.pop_back();
      return MacKey::from_hex(hex);
    }
    if (gen_bits >= 0) {
      auto key = linklab::pseudonym::generate_key(gen_bits, seed);
      if (!key_out.empty()) linklab::io::write_file(key_out, key.hex() + "\n");
      return key;
    }
    return std::nullopt;
  }
};

std::vector<std::string> sorted_keys(const std::unordered_map<std::string, std::string>& m) {
  std::vector<std::string> keys;
  keys.reserve(m.size());
  for (const auto& [k, _] : m) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  return keys;
}

void write_recovery_csv(const linklab::fingerprint::RecoveryResult& result, const fs::path& path) {
  std::ostringstream out;
  out << "tag,recovered_name,iteration\n";
  for (const auto& t : sorted_keys(result.assignments)) {
    out << t << ',' << result.assignments.at(t) << ',' << result.iteration.at(t) << '\n';
  }
  linklab::io::write_file(path, out.str());
}

std::map<std::string, std::uint64_t> load_count_csv(const fs::path& path) {
  std::map<std::string, std::uint64_t> counts;
  bool first = true;
  for (const auto& line : linklab::io::read_lines(path)) {
    if (line.empty()) continue;
    auto fields = linklab::io::split_csv_line(line);
    if (fields.size() != 2) throw std::runtime_error("malformed count row: " + line);
    char* end = nullptr;
    long long c = std::strtoll(fields[1].c_str(), &end, 10);
    if (end == fields[1].c_str() || *end != '\0') {
      if (first) {
        first = false;
        continue;  // header
      }
      throw std::runtime_error("non-numeric count: " + line);
    }
    first = false;
    if (c < 0) throw std::runtime_error("negative count: " + line);
    counts[fields[0]] += static_cast<std::uint64_t>(c);
  }
  return counts;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"record-linkage pseudonymization attack lab"};
  app.require_subcommand(1);

  std::string out_dir = "runs";
  std::string label;
  std::uint64_t seed = 0;
  bool seed_set = false;
  app.add_option("--out", out_dir, "output directory root")->capture_default_str();
  app.add_option("--label", label, "run label (default: UTC timestamp)");
  auto* seed_opt = app.add_option("--seed", seed, "seed for all randomness");

  // ---- build-table ------------------------------------------------------
  auto* build = app.add_subcommand("build-table", "compute a thresholded similarity table");
  std::string names_path;
  int threshold = 25;
  CostModelFlags build_costs;
  KeyFlags build_key;
  build->add_option("--names", names_path, "name list, one per line")
      ->required()
      ->check(CLI::ExistingFile);
  build->add_option("--threshold", threshold, "maximum kept similarity score")
      ->capture_default_str();
  build_costs.attach(build);
  build_key.attach(build);

  // ---- tag --------------------------------------------------------------
  auto* tag_cmd = app.add_subcommand("tag", "tag a name list with an HMAC key");
  std::string tag_names_path;
  KeyFlags tag_key;
  tag_cmd->add_option("--names", tag_names_path, "name list")->required()->check(CLI::ExistingFile);
  tag_key.attach(tag_cmd);

  // ---- stats ------------------------------------------------------------
  auto* stats = app.add_subcommand("stats", "connectivity statistics of a similarity table");
  std::string stats_table_path;
  std::vector<double> stats_fractions;
  stats->add_option("--table", stats_table_path, "similarity table CSV")
      ->required()
      ->check(CLI::ExistingFile);
  stats->add_option("--fractions", stats_fractions, "sample fractions for a connectivity sweep");

  // ---- attack -----------------------------------------------------------
  auto* attack = app.add_subcommand("attack", "run one of the attacks");
  attack->require_subcommand(1);

  auto* afp = attack->add_subcommand("fingerprint", "sorted-score fingerprint matching");
  std::string afp_tagged, afp_rebuilt;
  afp->add_option("--tagged", afp_tagged, "tagged table CSV")->required()->check(CLI::ExistingFile);
  afp->add_option("--rebuilt", afp_rebuilt, "rebuilt plaintext table CSV")
      ->required()
      ->check(CLI::ExistingFile);

  auto* afr = attack->add_subcommand("frequency", "rank-align tag counts with name frequencies");
  std::string afr_tag_counts, afr_freqs;
  std::size_t afr_top_k = 10;
  afr->add_option("--tag-counts", afr_tag_counts, "CSV tag,count")
      ->required()
      ->check(CLI::ExistingFile);
  afr->add_option("--frequencies", afr_freqs, "CSV name,count")
      ->required()
      ->check(CLI::ExistingFile);
  afr->add_option("--top-k", afr_top_k, "ranks to emit")->capture_default_str();

  auto* ach = attack->add_subcommand("chain", "chain recovery from seed assignments");
  std::string ach_tagged, ach_rebuilt, ach_seeds;
  ach->add_option("--tagged", ach_tagged, "tagged table CSV")->required()->check(CLI::ExistingFile);
  ach->add_option("--rebuilt", ach_rebuilt, "rebuilt plaintext table CSV")
      ->required()
      ->check(CLI::ExistingFile);
  ach->add_option("--seeds", ach_seeds, "CSV tag,name seed assignments")
      ->required()
      ->check(CLI::ExistingFile);

  auto* agm = attack->add_subcommand("graph-match", "subgraph matching attack sweep");
  std::string agm_table;
  std::vector<double> agm_fractions{1.0};
  std::string agm_strategy = "containment";
  agm->add_option("--table", agm_table, "plaintext similarity table CSV")
      ->required()
      ->check(CLI::ExistingFile);
  agm->add_option("--fractions", agm_fractions, "sample fractions")->capture_default_str();
  agm->add_option("--strategy", agm_strategy, "equality|containment")
      ->check(CLI::IsMember({"equality", "containment"}))
      ->capture_default_str();

  auto* adi = attack->add_subcommand("dictionary", "dictionary attack on a tag set");
  std::string adi_tags, adi_dict;
  int adi_bits = -1;
  adi->add_option("--tags", adi_tags, "file of hex tags, one per line")
      ->required()
      ->check(CLI::ExistingFile);
  adi->add_option("--dictionary", adi_dict, "candidate name list")
      ->required()
      ->check(CLI::ExistingFile);
  adi->add_option("--key-space-bits", adi_bits,
                  "enumerate all demo keys of this entropy; omit for unkeyed hashes")
      ->check(CLI::Range(0, 20));

  // ---- experiment sweep --------------------------------------------------
  auto* experiment = app.add_subcommand("experiment", "end-to-end experiments");
  experiment->require_subcommand(1);
  auto* sweep = experiment->add_subcommand(
      "sweep", "connectivity + matching sweep over sample fractions");
  std::string sweep_names;
  int sweep_threshold = 25;
  std::vector<double> sweep_fractions{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::string sweep_strategy = "containment";
  CostModelFlags sweep_costs;
  sweep->add_option("--names", sweep_names, "name list")->required()->check(CLI::ExistingFile);
  sweep->add_option("--threshold", sweep_threshold, "similarity threshold")->capture_default_str();
  sweep->add_option("--fractions", sweep_fractions, "sample fractions")->capture_default_str();
  sweep->add_option("--strategy", sweep_strategy, "equality|containment")
      ->check(CLI::IsMember({"equality", "containment"}))
      ->capture_default_str();
  sweep_costs.attach(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage errors exit 2
  }
  seed_set = seed_opt->count() > 0;
  auto seed_arg = seed_set ? std::optional<std::uint64_t>(seed) : std::nullopt;

  try {
    using namespace linklab;

    if (*build) {
      Run run(out_dir, "build-table", label);
      run.record_input("names", names_path);
      run.meta["config"] = {{"threshold", threshold}, {"cost_model", build_costs.to_json()}};
      if (seed_set) run.meta["config"]["seed"] = seed;

      auto report = corpus::load_names(names_path);
      auto key = build_key.resolve(seed_arg);
      auto table = simtable::build_table(report.list, threshold, build_costs.model, key);
      simtable::save_table(table, run.dir / "table.csv", build_costs.model, report.list.size());
      run.meta["config"]["id_kind"] = key ? "tagged" : "plaintext";
      run.meta["result"] = {{"names", report.list.size()},
                            {"dropped", report.dropped},
                            {"records", table.records().size()}};
      if (key) {
        auto tagmap = pseudonym::tag_corpus(report.list, *key);
        pseudonym::save_tagmap(tagmap, run.dir / "tagmap.csv");  // evaluation-only ground truth
      }
      run.finish();
      std::cout << run.dir.string() << "\n";
    } else if (*tag_cmd) {
      Run run(out_dir, "tag", label);
      run.record_input("names", tag_names_path);
      auto report = corpus::load_names(tag_names_path);
      auto key = tag_key.resolve(seed_arg);
      if (!key) throw std::runtime_error("tag requires a key (--hmac-key-hex/--hmac-key-file/--gen-key-bits)");
      auto tagmap = pseudonym::tag_corpus(report.list, *key);
      pseudonym::save_tagmap(tagmap, run.dir / "tagmap.csv");
      std::ostringstream tags;
      for (const auto& name : report.list) tags << tagmap.forward.at(name) << '\n';
      io::write_file(run.dir / "tags.txt", tags.str());
      run.meta["result"] = {{"names", report.list.size()}};
      run.finish();
      std::cout << run.dir.string() << "\n";
    } else if (*stats) {
      Run run(out_dir, "stats", label);
      run.record_input("table", stats_table_path);
      auto table = simtable::load_table(stats_table_path);
      auto graph = simgraph::build_graph(table);
      if (stats_fractions.empty()) {
        auto comp = simgraph::components(graph);
        io::write_file(run.dir / "components.json", comp.to_json() + "\n");
        std::cout << comp.to_json() << "\n";
      } else {
        run.meta["config"] = {{"fractions", stats_fractions}, {"seed", seed}};
        corpus::NameList ids(std::vector<std::string>(graph.ids.begin(), graph.ids.end()));
        std::ostringstream csv;
        csv << "fraction,n_nodes,singleton_fraction,giant_fraction\n";
        for (double f : stats_fractions) {
          auto sample = corpus::sample_names(ids, f, seed);
          std::unordered_set<std::string> keep(sample.begin(), sample.end());
          auto comp = simgraph::components(simgraph::induce_subgraph(graph, keep));
          csv << f << ',' << comp.n_nodes << ',' << comp.singleton_fraction << ','
              << comp.giant_fraction << '\n';
        }
        io::write_file(run.dir / "connectivity.csv", csv.str());
        std::cout << csv.str();
      }
      run.finish();
    } else if (*afp) {
      Run run(out_dir, "attack-fingerprint", label);
      run.record_input("tagged", afp_tagged);
      run.record_input("rebuilt", afp_rebuilt);
      auto tagged = simtable::load_table(afp_tagged);
      auto rebuilt = simtable::load_table(afp_rebuilt);
      auto uniq = fingerprint::uniqueness_rate(tagged);
      auto result = fingerprint::match_fingerprints(tagged, rebuilt);
      write_recovery_csv(result, run.dir / "recovery.csv");
      io::write_file(run.dir / "summary.json",
                     result.summary_json(uniq.n_rows, uniq.fraction) + "\n");
      run.finish();
      std::cout << result.summary_json(uniq.n_rows, uniq.fraction) << "\n";
    } else if (*afr) {
      Run run(out_dir, "attack-frequency", label);
      run.record_input("tag_counts", afr_tag_counts);
      run.record_input("frequencies", afr_freqs);
      auto tag_counts = load_count_csv(afr_tag_counts);
      auto freqs = corpus::load_frequencies(afr_freqs);
      auto ranked = fingerprint::frequency_attack(tag_counts, freqs, afr_top_k);
      std::ostringstream csv;
      csv << "tag,name,rank\n";
      for (const auto& r : ranked) csv << r.tag << ',' << r.name << ',' << r.rank << '\n';
      io::write_file(run.dir / "ranked.csv", csv.str());
      run.finish();
      std::cout << csv.str();
    } else if (*ach) {
      Run run(out_dir, "attack-chain", label);
      run.record_input("tagged", ach_tagged);
      run.record_input("rebuilt", ach_rebuilt);
      run.record_input("seeds", ach_seeds);
      auto tagged = simtable::load_table(ach_tagged);
      auto rebuilt = simtable::load_table(ach_rebuilt);
      std::unordered_map<std::string, std::string> seeds;
      bool first = true;
      for (const auto& line : io::read_lines(ach_seeds)) {
        if (line.empty()) continue;
        auto fields = io::split_csv_line(line);
        if (fields.size() != 2) throw std::runtime_error("malformed seed row: " + line);
        if (first && (fields[0] == "tag" || fields[1] == "name")) {
          first = false;
          continue;
        }
        first = false;
        seeds[fields[0]] = fields[1];
      }
      auto uniq = fingerprint::uniqueness_rate(tagged);
      auto result = fingerprint::chain_recovery(tagged, rebuilt, seeds);
      write_recovery_csv(result, run.dir / "recovery.csv");
      io::write_file(run.dir / "summary.json",
                     result.summary_json(uniq.n_rows, uniq.fraction) + "\n");
      run.finish();
      std::cout << result.summary_json(uniq.n_rows, uniq.fraction) << "\n";
    } else if (*agm) {
      Run run(out_dir, "attack-graph-match", label);
      run.record_input("table", agm_table);
      run.meta["config"] = {
          {"fractions", agm_fractions}, {"seed", seed}, {"strategy", agm_strategy}};
      auto table = simtable::load_table(agm_table);
      auto strategy = agm_strategy == "equality" ? graphmatch::Strategy::equality
                                                 : graphmatch::Strategy::containment;
      auto reports = graphmatch::run_experiment(table, agm_fractions, seed, strategy);
      std::ostringstream csv;
      csv << graphmatch::EvalReport::csv_header() << '\n';
      for (const auto& r : reports) csv << r.csv_row() << '\n';
      io::write_file(run.dir / "matching.csv", csv.str());
      run.finish();
      std::cout << csv.str();
    } else if (*adi) {
      Run run(out_dir, "attack-dictionary", label);
      run.record_input("tags", adi_tags);
      run.record_input("dictionary", adi_dict);
      std::unordered_set<std::string> tags;
      for (const auto& line : io::read_lines(adi_tags)) {
        if (!line.empty()) tags.insert(line);
      }
      auto dict = corpus::load_names(adi_dict);
      std::optional<std::vector<pseudonym::MacKey>> key_space;
      if (adi_bits >= 0) key_space = pseudonym::enumerate_demo_keys(adi_bits);
      auto recovered = pseudonym::dictionary_attack(tags, dict.list, key_space);
      std::ostringstream csv;
      csv << "tag,recovered_name\n";
      for (const auto& t : sorted_keys(recovered)) csv << t << ',' << recovered.at(t) << '\n';
      io::write_file(run.dir / "recovered.csv", csv.str());
      run.meta["result"] = {{"tags", tags.size()}, {"recovered", recovered.size()}};
      run.finish();
      std::cout << "recovered " << recovered.size() << "/" << tags.size() << "\n";
    } else if (*sweep) {
      Run run(out_dir, "experiment-sweep", label);
      run.record_input("names", sweep_names);
      run.meta["config"] = {{"threshold", sweep_threshold},
                            {"fractions", sweep_fractions},
                            {"seed", seed},
                            {"strategy", sweep_strategy},
                            {"cost_model", sweep_costs.to_json()}};
      auto report = corpus::load_names(sweep_names);
      auto table = simtable::build_table(report.list, sweep_threshold, sweep_costs.model);
      simtable::save_table(table, run.dir / "table.csv", sweep_costs.model, report.list.size());

      auto graph = simgraph::build_graph(table);
      corpus::NameList ids(std::vector<std::string>(graph.ids.begin(), graph.ids.end()));
      std::ostringstream conn;
      conn << "fraction,n_nodes,singleton_fraction,giant_fraction\n";
      for (double f : sweep_fractions) {
        auto sample = corpus::sample_names(ids, f, seed);
        std::unordered_set<std::string> keep(sample.begin(), sample.end());
        auto comp = simgraph::components(simgraph::induce_subgraph(graph, keep));
        conn << f << ',' << comp.n_nodes << ',' << comp.singleton_fraction << ','
             << comp.giant_fraction << '\n';
      }
      io::write_file(run.dir / "connectivity.csv", conn.str());

      auto strategy = sweep_strategy == "equality" ? graphmatch::Strategy::equality
                                                   : graphmatch::Strategy::containment;
      auto reports = graphmatch::run_experiment(table, sweep_fractions, seed, strategy);
      std::ostringstream csv;
      csv << graphmatch::EvalReport::csv_header() << '\n';
      for (const auto& r : reports) csv << r.csv_row() << '\n';
      io::write_file(run.dir / "matching.csv", csv.str());
      run.finish();
      std::cout << run.dir.string() << "\n";
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
