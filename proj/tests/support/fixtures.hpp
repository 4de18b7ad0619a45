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

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "test_util.hpp"

namespace vtrank::testing {

using Rows = std::vector<std::pair<std::string, std::vector<double>>>;

inline std::vector<double> unit(std::vector<double> v) {
	double n = 0;
	for (double x : v)
		n += x * x;
	n = std::sqrt(n);
	for (double &x : v)
		x /= n;
	return v;
}

inline std::vector<double> combine(std::size_t dim, std::initializer_list<std::pair<double, std::vector<double>>> parts) {
	std::vector<double> v(dim, 0.0);
	for (const auto &[c, p] : parts)
		for (std::size_t i = 0; i < dim; ++i)
			v[i] += c * p[i];
	return v;
}

/// Plain-data description of every input file the tool reads.
struct Corpus {
	struct Ad {
		std::string id;
		std::string text;
		std::vector<ImageTag> tags;
		std::vector<double> vector;  // empty: embed the text
	};

	std::size_t dim = 0;
	Rows words;
	Rows sentences;
	Rows metric;
	std::vector<std::pair<std::string, Pos>> lexicon;
	std::vector<Ad> pool;
	std::vector<std::string> categories;
	std::vector<EvalSample> dataset;

	struct Paths {
		std::filesystem::path words, sentences, metric, lexicon, pool, categories, dataset;
	};

	Paths write(const std::filesystem::path &dir) const {
		Paths p{dir / "words.vec",      dir / "sentences.jsonl", dir / "metric.vec",  dir / "lexicon.tsv",
		        dir / "pool.jsonl",     dir / "categories.txt",  dir / "dataset.jsonl"};
		write_rows(p.words, words);
		write_rows(p.metric, metric.empty() ? words : metric);
		{
			std::ofstream out(p.sentences);
			for (const auto &[k, v] : sentences)
				out << nlohmann::json{{"key", k}, {"vector", v}}.dump() << '\n';
		}
		{
			std::ofstream out(p.lexicon);
			for (const auto &[w, pos] : lexicon)
				out << w << '\t' << to_string(pos) << '\n';
		}
		{
			std::ofstream out(p.pool);
			for (const auto &ad : pool) {
				nlohmann::ordered_json row{{"id", ad.id}, {"text", ad.text}};
				row["image_tags"] = nlohmann::ordered_json::array();
				for (const auto &t : ad.tags)
					row["image_tags"].push_back({{"tag", t.tag}, {"confidence", t.confidence}});
				if (!ad.vector.empty())
					row["vector"] = ad.vector;
				out << row.dump() << '\n';
			}
		}
		{
			std::ofstream out(p.categories);
			for (const auto &c : categories)
				out << c << '\n';
		}
		{
			std::ofstream out(p.dataset);
			for (const auto &s : dataset)
				out << nlohmann::json{{"id", s.id}, {"ad_text", s.ad_text}, {"golden_queries", s.golden_queries}}.dump()
				    << '\n';
		}
		return p;
	}

private:
	static void write_rows(const std::filesystem::path &path, const Rows &rows) {
		std::ofstream out(path);
		out.precision(17);
		for (const auto &[k, v] : rows) {
			out << k;
			for (double x : v)
				out << ' ' << x;
			out << '\n';
		}
	}
};

/// A corpus turned into live library objects. Pinned in memory since the space holds pointers.
struct Loaded {
	WordEmbeddingStore words;
	SentenceEmbeddingStore sentences;
	WordEmbeddingStore metric{0, "metric"};
	LexiconTagger tagger = LexiconTagger::with_default_lexicon();
	std::unique_ptr<EmbeddingSpace> space;
	AdPoolIndex pool;
	CategorySet categories;
	std::vector<EvalSample> dataset;

	explicit Loaded(const Corpus &c) {
		for (const auto &[k, v] : c.words)
			words.insert(k, DenseVector(v));
		for (const auto &[k, v] : c.sentences)
			sentences.insert(k, DenseVector(v));
		for (const auto &[k, v] : c.metric.empty() ? c.words : c.metric)
			metric.insert(k, DenseVector(v));
		for (const auto &[w, p] : c.lexicon)
			tagger.add(w, p);
		space = std::make_unique<EmbeddingSpace>(&words, sentences.empty() ? nullptr : &sentences);
		std::stringstream pool_rows;
		for (const auto &ad : c.pool) {
			nlohmann::json row{{"id", ad.id}, {"text", ad.text}};
			row["image_tags"] = nlohmann::json::array();
			for (const auto &t : ad.tags)
				row["image_tags"].push_back({{"tag", t.tag}, {"confidence", t.confidence}});
			if (!ad.vector.empty())
				row["vector"] = ad.vector;
			pool_rows << row.dump() << '\n';
		}
		if (!c.pool.empty())
			pool = read_pool(pool_rows, *space);
		categories = build_category_set(c.categories, *space);
		dataset = c.dataset;
	}
	Loaded(const Loaded &) = delete;
	Loaded &operator=(const Loaded &) = delete;

	Resources resources() const { return {space.get(), &tagger, &pool, &categories, nullptr}; }

	KeywordExtractor extractor(Mode mode) const {
		EngineConfig cfg;
		cfg.mode = mode;
		return KeywordExtractor(resources(), cfg);
	}
};

inline constexpr const char *furniture_ad = "Online Store. Asian antique and vintage furniture";
inline constexpr const char *furniture_neighbor = "Furniture and Decor Sale. Up to 70% Off Top Brands And Styles!";
inline constexpr const char *house_ad = "Do you need to sell your house fast?";
inline constexpr const char *house_neighbor = "Homeowners Could Sell Their Homes Fast. realtors get the job done.";

/*
 * Furniture store ad in 32 dimensions. Axes: 0 furniture, 1 and 2 antique and vintage
 * looks, 3 store, 4 chair, 5 decor, 6 real estate, 7 jewelry, 8 and 9 spare.
 * furniture, antique and vintage form a triangle; the neighbor's tag (chair) and
 * word (decor) attach to furniture only.
 */
inline Corpus furniture_corpus() {
	const std::size_t d = 32;
	Corpus c;
	c.dim = d;
	auto e = [&](std::size_t i) { return axes(d, {{i, 1.0}}); };
	const double side = std::sqrt(1.0 - 0.93 * 0.93);
	c.words = {{"furniture", e(0)},
	           {"antique", at_cosine(d, 0, 1, 0.93)},
	           {"vintage", axes(d, {{0, 0.93}, {1, 0.5 * side}, {2, std::sqrt(0.75) * side}})},
	           {"store", e(3)},
	           {"chair", at_cosine(d, 0, 4, 0.93)},
	           {"decor", at_cosine(d, 0, 5, 0.93)},
	           {"sale", unit(axes(d, {{3, 0.6}, {8, 0.8}}))},
	           {"brands", unit(axes(d, {{3, 0.5}, {9, 0.866}}))},
	           {"styles", unit(axes(d, {{5, 0.5}, {9, 0.866}}))},
	           {"real", e(6)},
	           {"estate", e(6)},
	           {"house", e(6)},
	           {"jewelry", e(7)},
	           {"rings", e(7)}};
	auto ad = axes(d, {{0, 0.8}, {1, 0.25}, {3, 0.2}});
	c.sentences = {{furniture_ad, ad}};
	c.pool = {
		{"n-furniture", furniture_neighbor, {{"furniture", 0.95}, {"chair", 0.83}}, unit(combine(d, {{1.0, unit(ad)}, {0.1, e(8)}}))},
		{"n-house", "Sell your house fast", {{"house", 0.91}}, e(6)},
		{"n-jewelry", "Fine jewelry and rings", {{"rings", 0.88}}, e(7)},
	};
	c.categories = {"furniture", "jewelry", "real estate"};
	c.dataset = {{"furniture-1", furniture_ad, {"furniture"}}};
	return c;
}

/*
 * Real-estate ad. Axes: 0 house, 1 sell, 2 need, 3 home, 4 owner, 5 jobs, 6 travel, 7 spare.
 * The ad words are mutually unlinked; home and homeowners attach to house.
 */
inline Corpus house_corpus() {
	const std::size_t d = 8;
	Corpus c;
	c.dim = d;
	auto e = [&](std::size_t i) { return axes(d, {{i, 1.0}}); };
	c.words = {{"house", e(0)},
	           {"sell", e(1)},
	           {"need", e(2)},
	           {"home", unit(axes(d, {{0, 0.93}, {3, 0.3676}}))},
	           {"homes", unit(axes(d, {{0, 0.93}, {3, 0.3676}}))},
	           {"homeowners", unit(axes(d, {{0, 0.91}, {4, 0.4146}}))},
	           {"realtors", unit(axes(d, {{0, 0.5}, {4, 0.866}}))},
	           {"job", e(5)},
	           {"jobs", e(5)},
	           {"travel", e(6)},
	           {"real", unit(axes(d, {{0, 0.8}, {3, 0.6}}))},
	           {"estate", unit(axes(d, {{0, 0.8}, {3, 0.6}}))}};
	auto ad = axes(d, {{0, 0.5}, {1, 0.8}, {2, 0.3}});
	c.sentences = {{house_ad, ad}};
	c.pool = {
		{"n-home", house_neighbor, {{"house", 0.9}, {"home", 0.8}}, unit(combine(d, {{1.0, unit(ad)}, {0.1, e(7)}}))},
		{"n-travel", "Cheap travel deals", {{"beach", 0.9}}, e(6)},
	};
	c.categories = {"real estate", "jobs", "travel"};
	c.dataset = {{"house-1", house_ad, {"house", "home"}}};
	return c;
}

/// Adds `n` unrelated ads with random vectors kept away from `avoid`.
inline void add_filler_ads(Corpus &c, std::size_t n, std::uint64_t seed, const std::vector<double> &avoid) {
	std::mt19937_64 rng(seed);
	std::vector<std::string> vocab;
	for (const auto &[w, _] : c.words)
		vocab.push_back(w);
	std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
	std::uniform_real_distribution<double> conf(0.0, 1.0);
	for (std::size_t i = 0; i < n; ++i) {
		std::vector<double> v;
		do
			v = random_vector(rng, c.dim);
		while (ref_cosine(v, avoid) > 0.9);
		std::string text;
		for (int k = 0; k < 6; ++k)
			text += (k ? " " : "") + vocab[pick(rng)];
		c.pool.push_back({"filler-" + std::to_string(i), text, {{vocab[pick(rng)], conf(rng)}, {vocab[pick(rng)], conf(rng)}}, v});
	}
}

/// Pronounceable pseudo-words, unique within one generator.
class WordMaker {
public:
	explicit WordMaker(std::mt19937_64 &rng) : m_rng(rng) {}

	std::string next() {
		static constexpr std::string_view cons = "bdfgklmnprstvz";
		static constexpr std::string_view vow = "aeiou";
		std::uniform_int_distribution<std::size_t> c(0, cons.size() - 1), v(0, vow.size() - 1);
		for (;;) {
			std::string w;
			for (int s = 0; s < 3; ++s) {
				w += cons[c(m_rng)];
				w += vow[v(m_rng)];
			}
			if (m_used.insert(w).second)
				return w;
		}
	}

private:
	std::mt19937_64 &m_rng;
	std::set<std::string> m_used;
};

/// What kind of sample an ablation row is; see ablation_corpus.
enum class SampleKind { GoldenHub, Plain, Decoy, OffCategory, TagOnly, TagMissing };

struct AblationCorpus {
	Corpus corpus;
	std::vector<SampleKind> kinds;
	std::vector<bool> synonym;  // prediction from the ad text is a metric-space near miss
};

/*
 * Seeded synthetic benchmark. Each sample has one golden noun tied to a category axis.
 * 60% of samples carry the golden word in the ad text, 40% only through a similar ad's
 * image tag. Ad texts also hold a tight distractor cluster, generic filler nouns and
 * sometimes a decoy that matches the ad but not its category. Metric vectors are drawn
 * separately so soft hits come only from planted near-synonyms.
 */
inline AblationCorpus ablation_corpus(std::uint64_t seed = 20260611, std::size_t samples = 50) {
	std::mt19937_64 rng(seed);
	std::mt19937_64 metric_rng(seed ^ 0x9e3779b97f4a7c15ull);
	WordMaker maker(rng);

	const std::size_t n_cat = 6, n_generic = 8, per_sample = 9;
	const std::size_t g_axis = n_cat, h_base = n_cat + 1, s_base = h_base + n_generic;
	const std::size_t d = s_base + per_sample * samples;
	const std::size_t metric_dim = 32;

	AblationCorpus out;
	Corpus &c = out.corpus;
	c.dim = d;
	auto e = [&](std::size_t i) { return axes(d, {{i, 1.0}}); };

	std::vector<std::vector<double>> cat_axes;
	for (std::size_t k = 0; k < n_cat; ++k) {
		cat_axes.push_back(e(k));
		std::string phrase = maker.next() + " " + maker.next();
		c.categories.push_back(phrase);
		c.sentences.push_back({phrase, e(k)});
	}
	std::vector<std::string> generics;
	for (std::size_t j = 0; j < n_generic; ++j) {
		generics.push_back(maker.next());
		c.words.push_back({generics.back(), unit(axes(d, {{g_axis, 0.5}, {h_base + j, 0.866}}))});
	}
	const std::vector<std::string> function_words{"the", "and", "with", "for", "your", "our"};
	for (const auto &w : function_words)
		c.lexicon.push_back({w, Pos::Other});

	std::map<std::string, std::vector<double>> metric;
	auto metric_vector = [&] { return unit(random_vector(metric_rng, metric_dim)); };
	for (const auto &g : generics)
		metric[g] = metric_vector();

	// Fixed mix, shuffled.
	std::vector<SampleKind> kinds;
	auto push = [&](SampleKind k, double frac) {
		for (std::size_t i = 0, n = static_cast<std::size_t>(std::lround(frac * static_cast<double>(samples))); i < n; ++i)
			kinds.push_back(k);
	};
	push(SampleKind::GoldenHub, 0.10);
	push(SampleKind::Decoy, 0.22);
	push(SampleKind::OffCategory, 0.06);
	push(SampleKind::TagOnly, 0.32);
	push(SampleKind::TagMissing, 0.08);
	while (kinds.size() < samples)
		kinds.push_back(SampleKind::Plain);
	kinds.resize(samples);
	std::shuffle(kinds.begin(), kinds.end(), rng);
	out.kinds = kinds;

	std::size_t tag_samples_seen = 0;
	std::uniform_int_distribution<std::size_t> pick_cat(0, n_cat - 1), pick_gen(0, n_generic - 1);
	std::uniform_int_distribution<std::size_t> pick_fn(0, function_words.size() - 1);
	std::uniform_real_distribution<double> conf(0.6, 0.99);

	for (std::size_t i = 0; i < samples; ++i) {
		const SampleKind kind = kinds[i];
		const std::size_t b = s_base + per_sample * i;
		auto s = [&](std::size_t k) { return e(b + k); };
		const auto &cat = cat_axes[pick_cat(rng)];
		const bool tag_only = kind == SampleKind::TagOnly || kind == SampleKind::TagMissing;

		auto add_word = [&](std::vector<double> v) {
			std::string w = maker.next();
			c.words.push_back({w, std::move(v)});
			c.lexicon.push_back({w, Pos::Noun});
			return w;
		};
		const std::vector<double> g_vec = kind == SampleKind::OffCategory
		                                      ? unit(combine(d, {{0.3, cat}, {0.954, s(0)}}))
		                                      : unit(combine(d, {{0.8, cat}, {0.6, s(0)}}));
		const std::string golden = add_word(g_vec);
		const std::string sibling = add_word(unit(combine(d, {{0.8, cat}, {0.6, s(6)}})));
		std::vector<std::string> content;
		std::string near;
		if (tag_only) {
			near = add_word(unit(combine(d, {{0.8, cat}, {0.48, s(0)}, {0.36, s(1)}})));
			content.push_back(near);
		} else {
			content.push_back(golden);
		}
		if (kind == SampleKind::GoldenHub) {
			content.push_back(add_word(unit(combine(d, {{0.93, g_vec}, {0.3676, s(4)}}))));
			content.push_back(add_word(unit(combine(d, {{0.93, g_vec}, {0.3676, s(5)}}))));
		} else {
			content.push_back(add_word(s(3)));
			content.push_back(add_word(unit(combine(d, {{0.93, s(3)}, {0.3676, s(4)}}))));
			content.push_back(add_word(unit(combine(d, {{0.93, s(3)}, {0.3676, s(5)}}))));
		}
		if (kind == SampleKind::Decoy)
			content.push_back(add_word(s(2)));
		std::size_t g1 = pick_gen(rng), g2 = (g1 + 1 + pick_gen(rng) % (n_generic - 1)) % n_generic;
		content.push_back(generics[g1]);
		content.push_back(generics[g2]);
		std::shuffle(content.begin(), content.end(), rng);

		std::string text;
		for (std::size_t k = 0; k < content.size(); ++k) {
			if (k)
				text += ' ';
			if (k % 2 == 1)
				text += function_words[pick_fn(rng)] + " ";
			text += content[k];
		}
		text[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
		text += '.';

		auto ad_vec = combine(d, {{0.5, cat}, {0.7, s(0)}, {0.3, e(g_axis)}});
		if (kind == SampleKind::Decoy)
			ad_vec = combine(d, {{1.0, ad_vec}, {0.9, s(2)}});
		c.sentences.push_back({text, ad_vec});

		char id[32];
		std::snprintf(id, sizeof(id), "s%03zu", i);
		c.dataset.push_back({id, text, {golden}});

		// The similar ad, and one unrelated ad.
		const std::string gen3 = generics[(g2 + 1) % n_generic];
		Corpus::Ad nb{std::string("nb-") + id, "", {}, unit(combine(d, {{1.0, unit(ad_vec)}, {0.15, s(7)}}))};
		if (kind == SampleKind::TagOnly) {
			nb.text = near + " and " + golden + " " + gen3;
			nb.tags = {{golden, conf(rng)}, {sibling, 0.55}};
		} else if (kind == SampleKind::TagMissing) {
			nb.text = gen3 + " for " + generics[(g2 + 2) % n_generic];
			nb.tags = {{golden, conf(rng)}};
		} else {
			nb.text = golden + " with " + sibling + " " + gen3;
			nb.tags = {{sibling, 0.81}, {golden, 0.93}};
		}
		c.pool.push_back(std::move(nb));
		c.pool.push_back({std::string("other-") + id, generics[g1] + " " + generics[g2], {{generics[g1], 0.5}}, s(8)});

		// Metric vectors: independent draws kept clear of the golden word, except planted synonyms.
		bool syn = false;
		if (tag_only)
			syn = (tag_samples_seen++ % 2) == 0;
		out.synonym.push_back(syn);
		metric[golden] = metric_vector();
		std::vector<std::string> others{sibling};
		for (const auto &w : content)
			if (w != golden && !metric.count(w))
				others.push_back(w);
		for (const auto &w : others) {
			std::vector<double> v;
			do
				v = metric_vector();
			while (ref_cosine(v, metric[golden]) >= 0.6);
			if (syn && w == near) {
				// 0.9 golden + orthogonal remainder: cosine exactly 0.9.
				double dot = 0;
				for (std::size_t k = 0; k < metric_dim; ++k)
					dot += v[k] * metric[golden][k];
				std::vector<double> perp(metric_dim);
				for (std::size_t k = 0; k < metric_dim; ++k)
					perp[k] = v[k] - dot * metric[golden][k];
				perp = unit(perp);
				for (std::size_t k = 0; k < metric_dim; ++k)
					v[k] = 0.9 * metric[golden][k] + std::sqrt(1 - 0.81) * perp[k];
			}
			metric[w] = v;
		}
	}
	for (auto &[w, v] : metric)
		c.metric.push_back({w, v});
	return out;
}

} // namespace vtrank::testing
