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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ad_pool.hpp"
#include "category_bias.hpp"
#include "embedding_space.hpp"
#include "graph_ranker.hpp"
#include "text_pipeline.hpp"
#include "tfidf.hpp"

namespace vtrank {

enum class Mode { Unbiased, SelfBiased, SelfCatBiased, VisualTextRank, TfidfBaseline };

inline std::string_view to_string(Mode m) {
	switch (m) {
	case Mode::Unbiased: return "unbiased";
	case Mode::SelfBiased: return "self_biased";
	case Mode::SelfCatBiased: return "self_cat_biased";
	case Mode::VisualTextRank: return "visual_text_rank";
	case Mode::TfidfBaseline: break;
	}
	return "tfidf_baseline";
}

/// Accepts the lowercase names above in any case, with '-' or '_'.
inline std::optional<Mode> parse_mode(std::string_view s) {
	std::string k = to_lower(s);
	for (char &c : k)
		if (c == '-')
			c = '_';
	for (Mode m : {Mode::Unbiased, Mode::SelfBiased, Mode::SelfCatBiased, Mode::VisualTextRank, Mode::TfidfBaseline})
		if (k == to_string(m))
			return m;
	if (k == "tfidf")
		return Mode::TfidfBaseline;
	return std::nullopt;
}

struct EngineConfig {
	Mode mode = Mode::VisualTextRank;
	RankConfig rank;
	AugmentationConfig augmentation;
	CategoryBiasConfig category;

	void validate() const {
		rank.validate();
		augmentation.validate();
		category.validate();
	}
};

/// Loaded inputs shared by extractions. Everything is borrowed and read-only.
struct Resources {
	const EmbeddingSpace *space = nullptr;
	const PosTagger *tagger = nullptr;
	const AdPoolIndex *pool = nullptr;
	const CategorySet *categories = nullptr;
	const DocumentFrequencies *document_frequencies = nullptr;
};

/// Everything computed for one ad, kept for diagnostics.
struct Extraction {
	CandidateTerm keyword;
	TokenGraph graph;
	BiasVector self_bias;
	BiasVector category_bias;
	BiasVector bias;
	RankScores scores;
	std::optional<CategoryMatch> category;
	std::vector<SimilarAd> neighbors;
	std::vector<std::string> tags;
	std::vector<CandidateTerm> words;
};

class KeywordExtractor {
public:
	KeywordExtractor(Resources resources, EngineConfig config) : m_res(resources), m_config(std::move(config)) {
		m_config.validate();
		if (!m_res.tagger)
			throw ConfigError("no POS tagger configured");
		const Mode mode = m_config.mode;
		if (mode == Mode::TfidfBaseline) {
			if (!m_res.document_frequencies)
				throw ConfigError("mode tfidf_baseline requires document-frequency stats");
			return;
		}
		if (!m_res.space)
			throw ConfigError("mode " + std::string(to_string(mode)) + " requires embeddings");
		if ((mode == Mode::SelfCatBiased || mode == Mode::VisualTextRank) && (!m_res.categories || m_res.categories->empty()))
			throw ConfigError("mode " + std::string(to_string(mode)) + " requires categories");
		if (mode == Mode::VisualTextRank && (!m_res.pool || m_res.pool->empty()))
			throw ConfigError("mode visual_text_rank requires an ad pool");
	}

	const EngineConfig &config() const noexcept { return m_config; }

	/// Runs the configured mode. Throws NoKeywordError when the text has no candidate.
	Extraction extract(std::string_view ad_text) const {
		Extraction out;
		const Mode mode = m_config.mode;
		if (mode == Mode::TfidfBaseline) {
			auto r = tfidf_keyword(ad_text, *m_res.tagger, *m_res.document_frequencies);
			out.keyword = r.term;
			out.graph = TokenGraph({r.term});
			out.scores.values = {r.score};
			return out;
		}

		auto candidates = extract_candidates(ad_text, *m_res.tagger, Origin::AdText);
		if (candidates.empty())
			throw NoKeywordError();
		const EmbeddingSpace &space = *m_res.space;
		out.graph = build_token_graph(std::move(candidates), space, m_config.rank.edge_threshold);

		if (mode == Mode::Unbiased) {
			out.bias = BiasVector::uniform(out.graph.size());
		} else {
			DenseVector ad_vector = space.embed(ad_text);
			if (mode == Mode::VisualTextRank)
				augment(out, ad_vector);
			out.self_bias = self_bias(out.graph.vertices(), ad_vector, space);
			if (mode == Mode::SelfBiased) {
				out.bias = out.self_bias;
			} else {
				out.category = infer_category(ad_vector, *m_res.categories);
				const DenseVector &cat_vector = m_res.categories->vectors[out.category->index];
				out.category_bias = category_bias(cat_vector, out.graph.vertices(), space, m_config.category);
				out.bias = combine_biases(out.self_bias, out.category_bias);
			}
		}
		out.scores = rank(out.graph, m_config.rank, out.bias);
		out.keyword = select_keyword(out.graph, out.scores);
		return out;
	}

	std::string extract_keyword(std::string_view ad_text) const { return extract(ad_text).keyword.term; }

private:
	void augment(Extraction &out, const DenseVector &ad_vector) const {
		const auto &aug = m_config.augmentation;
		const EmbeddingSpace &space = *m_res.space;
		out.neighbors = retrieve_similar(*m_res.pool, ad_vector, aug.m);
		auto existing = vertex_terms(out.graph);
		out.tags = select_tags(std::span<const SimilarAd>(out.neighbors), space, aug.min_tag_sim, aug.max_tags, existing);
		existing.insert(out.tags.begin(), out.tags.end());
		out.words = select_words(std::span<const SimilarAd>(out.neighbors), ad_vector, space, *m_res.tagger,
		                         aug.min_word_sim, aug.max_words, existing);
		out.graph = augment_graph(std::move(out.graph), out.tags, out.words, space, m_config.rank.edge_threshold);
	}

	Resources m_res;
	EngineConfig m_config;
};

/// Graph dump: vertices with bias components and scores, plus the edge list.
inline nlohmann::ordered_json graph_to_json(const Extraction &x) {
	auto at = [](const BiasVector &b, std::size_t i) -> nlohmann::ordered_json {
		if (i < b.size())
			return b[i];
		return nullptr;
	};
	nlohmann::ordered_json doc;
	doc["keyword"] = x.keyword.term;
	doc["augmented"] = x.graph.augmented;
	if (x.category)
		doc["category"] = {{"phrase", x.category->phrase}, {"score", x.category->score}};
	doc["vertices"] = nlohmann::ordered_json::array();
	for (std::size_t i = 0; i < x.graph.size(); ++i) {
		const auto &v = x.graph.vertex(i);
		nlohmann::ordered_json row;
		row["index"] = i;
		row["term"] = v.term;
		row["pos"] = std::string(to_string(v.pos));
		row["origin"] = std::string(to_string(v.origin));
		row["position"] = v.position;
		row["self_bias"] = at(x.self_bias, i);
		row["category_bias"] = at(x.category_bias, i);
		row["bias"] = at(x.bias, i);
		row["score"] = at(BiasVector{x.scores.values}, i);
		doc["vertices"].push_back(std::move(row));
	}
	doc["edges"] = nlohmann::ordered_json::array();
	for (const auto &e : x.graph.edges())
		doc["edges"].push_back({{"i", e.i}, {"j", e.j}, {"weight", e.weight}});
	doc["iterations_run"] = x.scores.iterations_run;
	doc["converged"] = x.scores.converged;
	return doc;
}

} // namespace vtrank
