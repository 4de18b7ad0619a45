/*
 * Copyright 2026 The vtrank Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <vtrank/vtrank.hpp>

namespace vtrank::cli {

enum ExitCode : int { Ok = 0, Failure = 1, NoKeyword = 2 };

struct Options {
	std::string word_vectors;
	std::string sentence_vectors;
	std::string metric_vectors;
	std::string pool;
	std::string categories;
	std::string pos_lexicon;
	std::string df_stats;
	std::string edge_vectors = "word";
	std::string mode = "visual_text_rank";
	std::string modes;
	std::string out;

	EngineConfig engine;
	double soft_threshold = 0.8;
	std::size_t top_k = 0;
	bool explain = false;
	unsigned workers = 1;

	std::string text;
	std::string dataset;
};

/// Loaded inputs; members are filled on demand from the options.
struct Session {
	std::optional<WordEmbeddingStore> words;
	std::optional<SentenceEmbeddingStore> sentences;
	std::optional<WordEmbeddingStore> metric;
	std::optional<EmbeddingSpace> space;
	std::optional<AdPoolIndex> pool;
	std::optional<CategorySet> categories;
	std::optional<DocumentFrequencies> df;
	LexiconTagger tagger = LexiconTagger::with_default_lexicon();

	Resources resources() const {
		return {space ? &*space : nullptr, &tagger, pool ? &*pool : nullptr, categories ? &*categories : nullptr,
		        df ? &*df : nullptr};
	}
};

inline std::string fixed(double v, int digits = 6) {
	char buf[64];
	std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
	return buf;
}

inline void load_space(const Options &o, Session &s) {
	if (!o.word_vectors.empty())
		s.words = load_word_vectors(o.word_vectors);
	if (!o.sentence_vectors.empty())
		s.sentences = load_sentence_vectors(o.sentence_vectors);
	if (!s.words && !s.sentences)
		return;
	auto source = parse_term_source(o.edge_vectors);
	if (!source)
		throw ConfigError("--edge-vectors must be 'word' or 'sentence'");
	s.space.emplace(s.words ? &*s.words : nullptr, s.sentences ? &*s.sentences : nullptr, *source);
}

/// Loads whatever the options name. Missing inputs are diagnosed later, per mode.
inline void load_session(const Options &o, Session &s, std::ostream &err) {
	if (!o.pos_lexicon.empty())
		s.tagger.load(std::filesystem::path(o.pos_lexicon));
	load_space(o, s);
	if (!o.metric_vectors.empty())
		s.metric = load_word_vectors(o.metric_vectors);
	if (!o.df_stats.empty())
		s.df = DocumentFrequencies::load(o.df_stats);
	if (!o.categories.empty()) {
		if (!s.space)
			throw ConfigError("--categories needs --word-vectors or --sentence-vectors");
		s.categories = load_categories(o.categories, *s.space);
		if (s.categories->skipped)
			err << "warning: skipped " << s.categories->skipped << " category phrases without vectors\n";
	}
	if (!o.pool.empty()) {
		if (!s.space)
			throw ConfigError("--pool needs --word-vectors or --sentence-vectors");
		s.pool = build_index(o.pool, *s.space);
		if (s.pool->skipped)
			err << "warning: skipped " << s.pool->skipped << " ads that could not be embedded\n";
	}
}

inline Mode mode_from(const std::string &name) {
	auto m = parse_mode(name);
	if (!m)
		throw ConfigError("unknown mode '" + name + "'");
	return *m;
}

inline int cmd_extract(const Options &o, std::ostream &out, std::ostream &err) {
	Session s;
	load_session(o, s, err);
	EngineConfig cfg = o.engine;
	cfg.mode = mode_from(o.mode);
	KeywordExtractor extractor(s.resources(), cfg);
	Extraction x = extractor.extract(o.text);
	out << x.keyword.term << '\n';
	if (o.top_k > 0) {
		std::size_t rank_no = 1;
		for (std::size_t i : top_k(x.graph, x.scores, o.top_k)) {
			const auto &v = x.graph.vertex(i);
			out << rank_no++ << '\t' << v.term << '\t' << fixed(x.scores.values[i]) << '\t' << to_string(v.origin)
			    << '\n';
		}
	}
	if (o.explain) {
		out << "mode: " << to_string(cfg.mode) << '\n';
		if (x.category)
			out << "category: " << x.category->phrase << " (" << fixed(x.category->score) << ")\n";
		out << "neighbors:";
		for (const auto &n : x.neighbors)
			out << ' ' << n.ad->id << " (" << fixed(n.relevance) << ")";
		out << "\ntags:";
		for (const auto &t : x.tags)
			out << ' ' << t;
		out << "\nwords:";
		for (const auto &w : x.words)
			out << ' ' << w.term;
		out << "\niterations: " << x.scores.iterations_run << (x.scores.converged ? " (converged)" : "") << '\n';
	}
	return Ok;
}

inline int cmd_inspect_graph(const Options &o, std::ostream &out, std::ostream &err) {
	Session s;
	load_session(o, s, err);
	EngineConfig cfg = o.engine;
	cfg.mode = mode_from(o.mode);
	if (cfg.mode == Mode::TfidfBaseline)
		throw ConfigError("inspect-graph needs a graph mode");
	KeywordExtractor extractor(s.resources(), cfg);
	Extraction x = extractor.extract(o.text);
	auto doc = graph_to_json(x);
	doc["mode"] = std::string(to_string(cfg.mode));
	out << doc.dump(2) << '\n';
	return Ok;
}

inline std::vector<Mode> parse_mode_list(const std::string &list, const std::string &fallback) {
	std::vector<Mode> modes;
	std::string item;
	std::stringstream ss(list.empty() ? fallback : list);
	while (std::getline(ss, item, ','))
		if (!trim(item).empty())
			modes.push_back(mode_from(std::string(trim(item))));
	if (modes.empty())
		throw ConfigError("no modes given");
	return modes;
}

inline void write_file(const std::filesystem::path &path, const std::string &content) {
	std::ofstream f(path, std::ios::binary);
	if (!f)
		throw Error("cannot write " + path.string());
	f << content;
	if (!f)
		throw Error("failed writing " + path.string());
}

inline int cmd_evaluate(const Options &o, std::ostream &out, std::ostream &err) {
	auto dataset = load_dataset(o.dataset);
	if (dataset.empty())
		throw Error("dataset " + o.dataset + " is empty");
	auto modes = parse_mode_list(o.modes, o.mode);
	Session s;
	load_session(o, s, err);
	MetricConfig metric;
	metric.soft_threshold = o.soft_threshold;
	metric.metric_store = s.metric ? &*s.metric : nullptr;

	std::vector<MetricReport> reports;
	for (Mode m : modes) {
		EngineConfig cfg = o.engine;
		cfg.mode = m;
		KeywordExtractor extractor(s.resources(), cfg);
		auto fn = [&](const EvalSample &sample) { return extractor.extract_keyword(sample.ad_text); };
		reports.push_back(evaluate(std::span<const EvalSample>(dataset), fn, metric, o.workers, std::string(to_string(m))));
	}
	std::string table = format_report_table(reports);
	std::string json = report_to_json(reports, metric).dump(2) + "\n";
	if (!o.out.empty()) {
		std::filesystem::path json_path(o.out);
		auto table_path = json_path;
		table_path.replace_extension(".txt");
		if (table_path == json_path)
			table_path += ".table";
		write_file(json_path, json);
		write_file(table_path, table);
	}
	out << table;
	return Ok;
}

inline int cmd_build_index(const Options &o, std::ostream &out, std::ostream &err) {
	if (o.pool.empty())
		throw ConfigError("build-index needs --pool");
	Session s;
	load_space(o, s);
	if (!s.space)
		throw ConfigError("build-index needs --word-vectors or --sentence-vectors");
	auto index = build_index(o.pool, *s.space);
	if (index.skipped)
		err << "warning: skipped " << index.skipped << " ads that could not be embedded\n";
	std::ostringstream buf;
	write_pool(buf, index);
	if (o.out.empty())
		out << buf.str();
	else
		write_file(o.out, buf.str());
	return Ok;
}

inline int cmd_tfidf(const Options &o, std::ostream &out, std::ostream &err) {
	if (o.df_stats.empty())
		throw ConfigError("tfidf needs --df-stats");
	Session s;
	if (!o.pos_lexicon.empty())
		s.tagger.load(std::filesystem::path(o.pos_lexicon));
	s.df = DocumentFrequencies::load(o.df_stats);
	auto r = tfidf_keyword(o.text, s.tagger, *s.df);
	out << r.term.term << '\n';
	if (o.explain)
		out << "score: " << fixed(r.score) << '\n';
	(void)err;
	return Ok;
}

/// Document frequencies over the texts of the pool file; no embeddings needed.
inline int cmd_df_stats(const Options &o, std::ostream &out, std::ostream &) {
	if (o.pool.empty())
		throw ConfigError("df-stats needs --pool");
	std::ifstream in(o.pool);
	if (!in)
		throw Error("cannot open " + o.pool);
	DocumentFrequencies df;
	std::string line;
	std::size_t lineno = 0;
	while (std::getline(in, line)) {
		++lineno;
		if (trim(line).empty())
			continue;
		try {
			df.add_document(nlohmann::json::parse(line).at("text").get<std::string>());
		} catch (const nlohmann::json::exception &e) {
			throw ParseError(o.pool + ": " + e.what(), lineno);
		}
	}
	std::ostringstream buf;
	df.write(buf);
	if (o.out.empty())
		out << buf.str();
	else
		write_file(o.out, buf.str());
	return Ok;
}

inline constexpr const char *config_help = R"(Configuration file (--config PATH): flat "key = value" lines using the long
flag names without dashes, e.g.
    word-vectors = vectors.txt
    damping = 0.8
Flags given on the command line override the file; the file overrides defaults.

Exit codes: 0 success, 1 configuration or I/O error, 2 no extractable keyword.)";

/// Entry point shared by the binary and the tests.
inline int run(int argc, const char *const *argv, std::ostream &out = std::cout, std::ostream &err = std::cerr) {
	CLI::App app{"Keyword extraction for ad image search"};
	app.require_subcommand(1);
	app.fallthrough();
	app.set_config("--config", "", "Read options from a key = value file");
	app.footer(config_help);

	Options o;
	auto &rank = o.engine.rank;
	auto &aug = o.engine.augmentation;
	app.add_option("--word-vectors", o.word_vectors, "Word vectors (text format)");
	app.add_option("--sentence-vectors", o.sentence_vectors, "Sentence embeddings (JSON Lines)");
	app.add_option("--metric-vectors", o.metric_vectors, "Word vectors used only for evaluation metrics");
	app.add_option("--pool", o.pool, "Ad pool (JSON Lines)");
	app.add_option("--categories", o.categories, "Category phrases, one per line");
	app.add_option("--pos-lexicon", o.pos_lexicon, "Extra POS lexicon entries (token<TAB>POS)");
	app.add_option("--df-stats", o.df_stats, "Document-frequency stats for the tf-idf baseline");
	app.add_option("--edge-vectors", o.edge_vectors, "Store consulted first for term vectors: word|sentence")
		->capture_default_str();
	app.add_option("--mode", o.mode,
	               "unbiased|self_biased|self_cat_biased|visual_text_rank|tfidf_baseline")
		->capture_default_str();
	app.add_option("--m", aug.m, "Similar ads to retrieve")->capture_default_str();
	app.add_option("--max-tags", aug.max_tags, "Image tags to add")->capture_default_str();
	app.add_option("--min-tag-sim", aug.min_tag_sim, "Tag-to-word similarity needed (-1 accepts all)")
		->capture_default_str();
	app.add_option("--max-words", aug.max_words, "Neighbor words to add")->capture_default_str();
	app.add_option("--min-word-sim", aug.min_word_sim, "Word-to-ad similarity needed")->capture_default_str();
	app.add_option("--damping", rank.damping, "Damping factor d")->capture_default_str();
	app.add_option("--iterations", rank.iterations, "Maximum rank iterations")->capture_default_str();
	app.add_option("--epsilon", rank.convergence_epsilon, "Early-stop threshold on the largest score change")
		->capture_default_str();
	app.add_option("--edge-threshold", rank.edge_threshold, "Minimum similarity for an edge")->capture_default_str();
	app.add_option("--cat-bias-floor", o.engine.category.floor, "Category biases below this become 0")
		->capture_default_str();
	app.add_option("--soft-threshold", o.soft_threshold, "Soft-accuracy similarity threshold")->capture_default_str();
	app.add_option("--top-k", o.top_k, "Also print the N best vertices");
	app.add_flag("--explain", o.explain, "Print category, neighbors and augmentation");
	app.add_option("--modes", o.modes, "Comma-separated modes to evaluate");
	app.add_option("--out", o.out, "Output path");
	app.add_option("--workers", o.workers, "Evaluation threads")->capture_default_str();

	auto *extract = app.add_subcommand("extract", "Print the keyword for one ad text");
	extract->add_option("text", o.text, "Ad text")->required();
	auto *inspect = app.add_subcommand("inspect-graph", "Dump the ranked token graph as JSON");
	inspect->add_option("text", o.text, "Ad text")->required();
	auto *evaluate_cmd = app.add_subcommand("evaluate", "Score modes against a golden-query dataset");
	evaluate_cmd->add_option("dataset", o.dataset, "Dataset (JSON Lines)")->required();
	auto *index_cmd = app.add_subcommand("build-index", "Write the pool with materialized vectors");
	auto *tfidf_cmd = app.add_subcommand("tfidf", "Tf-idf baseline keyword for one ad text");
	tfidf_cmd->add_option("text", o.text, "Ad text")->required();
	auto *df_cmd = app.add_subcommand("df-stats", "Document frequencies over the pool texts");

	try {
		app.parse(argc, argv);
	} catch (const CLI::CallForHelp &e) {
		out << app.help();
		return Ok;
	} catch (const CLI::CallForAllHelp &e) {
		out << app.help("", CLI::AppFormatMode::All);
		return Ok;
	} catch (const CLI::ParseError &e) {
		err << "error: " << e.what() << '\n';
		return Failure;
	}

	try {
		if (*extract)
			return cmd_extract(o, out, err);
		if (*inspect)
			return cmd_inspect_graph(o, out, err);
		if (*evaluate_cmd)
			return cmd_evaluate(o, out, err);
		if (*index_cmd)
			return cmd_build_index(o, out, err);
		if (*tfidf_cmd)
			return cmd_tfidf(o, out, err);
		if (*df_cmd)
			return cmd_df_stats(o, out, err);
	} catch (const NoKeywordError &e) {
		err << "error: " << e.what() << '\n';
		return NoKeyword;
	} catch (const std::exception &e) {
		err << "error: " << e.what() << '\n';
		return Failure;
	}
	return Failure;
}

} // namespace vtrank::cli
