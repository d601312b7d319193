// Copyright 2026 The kgctx Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// kgctx command line: ingest dumps into indexes, assemble model inputs,
// score them with the stub encoder, and report dataset statistics.
//
// Exit codes: 0 success, 2 missing input, 3 malformed input.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kgctx/kgctx.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMissingInput = 2;
constexpr int kExitMalformedInput = 3;

// Raw flag values; validated into a PipelineConfig before any work runs.
struct CliOptions {
  std::string conceptnet;
  std::string dictionary;
  std::string dataset;
  std::string assembled;
  std::string index_dir;
  std::string out;
  std::string profile = "generic";
  std::size_t max_tokens = 192;
  std::uint64_t seed = 42;
  std::size_t ensemble_k = 1;
  std::size_t encoder_dim = 64;
  std::vector<std::string> relations;  // whitelist subset override
};

kgctx::PipelineConfig to_config(const CliOptions& opt) {
  kgctx::PipelineConfig config;
  config.conceptnet_dump = opt.conceptnet;
  config.dictionary_dump = opt.dictionary;
  config.dataset = opt.dataset;
  config.index_dir = opt.index_dir;
  config.output = opt.out;
  config.max_tokens = opt.max_tokens;
  config.seed = opt.seed;
  config.ensemble_k = opt.ensemble_k;

  auto profile = kgctx::parse_dataset_profile(opt.profile);
  if (!profile) throw kgctx::FatalFormat("unknown profile: " + opt.profile);
  config.profile = *profile;

  if (config.max_tokens < kgctx::PipelineConfig::kMinTokens)
    throw kgctx::FatalFormat("--max-tokens must be at least " +
                             std::to_string(kgctx::PipelineConfig::kMinTokens));
  if (config.ensemble_k < 1) throw kgctx::FatalFormat("--ensemble-k must be >= 1");

  if (!opt.relations.empty()) {
    std::set<kgctx::RelationType> filter;
    for (const std::string& name : opt.relations) {
      auto rel = kgctx::parse_relation(name);
      if (!rel) throw kgctx::FatalFormat("unknown relation in whitelist override: " + name);
      filter.insert(*rel);
    }
    config.relation_whitelist = std::move(filter);
  }
  return config;
}

void require_file(const fs::path& path, const char* what) {
  if (path.empty() || !fs::exists(path))
    throw kgctx::IoError(std::string(what) + " not found: " + path.string());
}

// Writes through a temp file so a failure never leaves a partial index.
template <typename WriteFn>
void write_atomically(const fs::path& target, WriteFn&& write) {
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::out | std::ios::binary | std::ios::trunc);
    if (!out.is_open()) throw kgctx::IoError("cannot write: " + tmp.string());
    write(out);
  }
  fs::rename(tmp, target);
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::out | std::ios::binary | std::ios::trunc);
  if (!out.is_open()) throw kgctx::IoError("cannot write output: " + path.string());
  return out;
}

int cmd_ingest(const kgctx::PipelineConfig& config) {
  if (config.conceptnet_dump.empty() && config.dictionary_dump.empty())
    throw kgctx::IoError("ingest needs --conceptnet and/or --dictionary");
  if (config.index_dir.empty()) throw kgctx::IoError("ingest needs --index-dir");
  fs::create_directories(config.index_dir);

  if (!config.conceptnet_dump.empty()) {
    require_file(config.conceptnet_dump, "conceptnet dump");
    kgctx::IngestOptions options;
    options.relation_filter = config.relation_whitelist;
    auto result = kgctx::ingest_dump_file(config.conceptnet_dump, options);
    const auto& r = result.report;
    write_atomically(config.index_dir / kgctx::kKgIndexFileName,
                     [&](std::ostream& out) { result.graph.save(out); });
    std::printf(
        "conceptnet: read=%zu kept=%zu dropped_by_relation=%zu dropped_by_language=%zu "
        "malformed=%zu merged_duplicates=%zu triples=%zu\n",
        r.read, r.kept, r.dropped_by_relation, r.dropped_by_language, r.malformed,
        r.merged_duplicates, result.graph.size());
    if (r.empty_graph) std::printf("warning: empty graph, no triples kept\n");
  }

  if (!config.dictionary_dump.empty()) {
    require_file(config.dictionary_dump, "dictionary dump");
    auto result = kgctx::ingest_dictionary_file(config.dictionary_dump);
    const auto& r = result.report;
    write_atomically(config.index_dir / kgctx::kDictIndexFileName,
                     [&](std::ostream& out) { result.index.save(out); });
    std::printf("dictionary: read=%zu indexed=%zu malformed=%zu entries=%zu\n", r.read,
                r.indexed, r.malformed, result.index.entry_count());
  }
  return kExitOk;
}

void print_counter(const char* name, const std::map<std::string, std::size_t>& counts) {
  std::printf("%s:", name);
  for (const auto& [key, n] : counts) std::printf(" %s=%zu", key.c_str(), n);
  std::printf("\n");
}

int cmd_assemble(const kgctx::PipelineConfig& config) {
  if (config.index_dir.empty()) throw kgctx::IoError("assemble needs --index-dir");
  const fs::path kg_index = config.index_dir / kgctx::kKgIndexFileName;
  const fs::path dict_index = config.index_dir / kgctx::kDictIndexFileName;
  require_file(kg_index, "knowledge-graph index");
  require_file(dict_index, "dictionary index");
  require_file(config.dataset, "dataset");
  if (config.output.empty()) throw kgctx::IoError("assemble needs --out");

  auto graph = kgctx::KnowledgeGraph::load_file(kg_index);
  auto dict = kgctx::DictionaryIndex::load_file(dict_index);
  auto dataset = kgctx::read_dataset_file(config.dataset, config.profile);

  kgctx::AssembleSummary summary;
  auto records =
      kgctx::assemble_dataset(graph, dict, dataset.examples, config.max_tokens, &summary);
  auto out = open_output(config.output);
  kgctx::write_assembled(out, records);

  std::printf("examples=%zu records=%zu\n", summary.examples, summary.records);
  print_counter("selection_branch", summary.branches);
  print_counter("question_stage", summary.q_stages);
  print_counter("choice_stage", summary.c_stages);
  if (!dataset.report.errors.empty())
    std::printf("dataset_errors=%zu\n", dataset.report.errors.size());
  return kExitOk;
}

int cmd_score(const kgctx::PipelineConfig& config, const std::string& assembled_path,
              std::size_t encoder_dim) {
  require_file(assembled_path, "assembled records");
  if (config.output.empty()) throw kgctx::IoError("score needs --out");

  std::ifstream in(assembled_path, std::ios::in | std::ios::binary);
  if (!in.is_open()) throw kgctx::IoError("cannot open: " + assembled_path);
  auto records = kgctx::read_assembled(in);

  std::map<std::string, std::size_t> predictions;
  auto out = open_output(config.output);
  if (config.ensemble_k == 1) {
    auto scores = kgctx::score_assembled(records, encoder_dim, config.seed);
    for (const auto& s : scores) {
      out << kgctx::to_json(s).dump() << '\n';
      predictions[s.example_id] = s.predicted_index;
    }
    std::printf("scored_examples=%zu models=1\n", scores.size());
  } else {
    auto ensemble =
        kgctx::ensemble_score(records, encoder_dim, config.seed, config.ensemble_k);
    for (const auto& e : ensemble) {
      out << kgctx::to_json(e).dump() << '\n';
      predictions[e.example_id] = e.ensemble_prediction;
    }
    std::printf("scored_examples=%zu models=%zu\n", ensemble.size(), config.ensemble_k);
  }

  if (!config.dataset.empty()) {
    require_file(config.dataset, "dataset");
    auto dataset = kgctx::read_dataset_file(config.dataset, config.profile);
    if (auto acc = kgctx::accuracy(dataset.examples, predictions)) {
      std::printf("accuracy=%.6f\n", *acc);
    } else {
      std::printf("accuracy=n/a (no labels)\n");
    }
  }
  return kExitOk;
}

int cmd_stats(const kgctx::PipelineConfig& config) {
  require_file(config.dataset, "dataset");
  auto dataset = kgctx::read_dataset_file(config.dataset, config.profile);
  auto stats = kgctx::split_stats(dataset.examples);

  std::printf("count=%zu with_facts=%zu\n", stats.count, stats.with_facts_count);
  std::printf("choices_histogram:");
  for (const auto& [n, c] : stats.choices_histogram) std::printf(" %zu=%zu", n, c);
  std::printf("\n");
  if (dataset.report.empty_dataset) std::printf("warning: empty dataset\n");
  if (!dataset.report.errors.empty()) {
    std::printf("record_errors=%zu\n", dataset.report.errors.size());
    for (const auto& e : dataset.report.errors)
      std::fprintf(stderr, "line %zu: %s\n", e.line, e.message.c_str());
  }

  if (!config.output.empty()) {
    auto out = open_output(config.output);
    kgctx::write_examples(out, dataset.examples);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"knowledge-context retrieval pipeline"};
  app.require_subcommand(1);

  CliOptions opt;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--index-dir", opt.index_dir, "index directory")
        ->envname("KGCTX_INDEX_DIR");
    cmd->add_option("--out", opt.out, "output file");
  };

  CLI::App* ingest = app.add_subcommand("ingest", "build indexes from dumps");
  ingest->add_option("--conceptnet", opt.conceptnet, "ConceptNet assertions TSV (.gz ok)");
  ingest->add_option("--dictionary", opt.dictionary, "dictionary JSONL dump (.gz ok)");
  ingest->add_option("--relation", opt.relations,
                     "restrict the relation whitelist (repeatable)");
  add_common(ingest);

  CLI::App* assemble = app.add_subcommand("assemble", "build model-input records");
  assemble->add_option("--dataset", opt.dataset, "dataset JSONL");
  assemble->add_option("--profile", opt.profile, "csqa|obqa|generic");
  assemble->add_option("--max-tokens", opt.max_tokens, "token budget per input");
  add_common(assemble);

  CLI::App* score = app.add_subcommand("score", "score assembled records");
  score->add_option("--assembled", opt.assembled, "assembled records JSONL");
  score->add_option("--dataset", opt.dataset, "dataset JSONL, for accuracy");
  score->add_option("--profile", opt.profile, "csqa|obqa|generic");
  score->add_option("--seed", opt.seed, "model seed");
  score->add_option("--ensemble-k", opt.ensemble_k, "number of ensemble models");
  score->add_option("--encoder-dim", opt.encoder_dim, "stub encoder dimension");
  add_common(score);

  CLI::App* stats = app.add_subcommand("stats", "dataset statistics");
  stats->add_option("--dataset", opt.dataset, "dataset JSONL");
  stats->add_option("--profile", opt.profile, "csqa|obqa|generic");
  add_common(stats);

  CLI11_PARSE(app, argc, argv);

  try {
    const kgctx::PipelineConfig config = to_config(opt);
    if (ingest->parsed()) return cmd_ingest(config);
    if (assemble->parsed()) return cmd_assemble(config);
    if (score->parsed()) return cmd_score(config, opt.assembled, opt.encoder_dim);
    if (stats->parsed()) return cmd_stats(config);
  } catch (const kgctx::IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitMissingInput;
  } catch (const kgctx::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitMalformedInput;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return kExitOk;
}
