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
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "embedding_space.hpp"
#include "graph_ranker.hpp"
#include "text_pipeline.hpp"

namespace vtrank {

struct ImageTag {
	std::string tag;
	double confidence = 0.0;

	friend bool operator==(const ImageTag &, const ImageTag &) = default;
};

/// An existing ad. Tags are kept sorted by descending confidence.
struct PooledAd {
	std::string id;
	std::string text;
	std::vector<ImageTag> image_tags;
	DenseVector text_vector;
};

struct AdPoolIndex {
	std::vector<PooledAd> ads;
	std::size_t dim = 0;
	/// Ads dropped at build time because their text could not be embedded.
	std::size_t skipped = 0;

	std::size_t size() const noexcept { return ads.size(); }
	bool empty() const noexcept { return ads.empty(); }
};

struct AugmentationConfig {
	std::size_t m = 1;
	std::size_t max_tags = 1;
	double min_tag_sim = 0.7;
	std::size_t max_words = 1;
	double min_word_sim = 0.0;

	void validate() const {
		if (m < 1)
			throw ConfigError("m must be at least 1");
		if (!(min_tag_sim >= -1.0 && min_tag_sim <= 1.0))
			throw ConfigError("min_tag_sim must lie in [-1, 1]");
		if (!(min_word_sim >= -1.0 && min_word_sim <= 1.0))
			throw ConfigError("min_word_sim must lie in [-1, 1]");
	}
};

/// Sorts by descending confidence; equal confidences keep file order.
inline void sort_tags(std::vector<ImageTag> &tags) {
	std::stable_sort(tags.begin(), tags.end(),
	                 [](const ImageTag &a, const ImageTag &b) { return a.confidence > b.confidence; });
}

/*
 * Pool file: JSON Lines, one ad per line:
 *   {"id": "...", "text": "...", "image_tags": [{"tag": "chair", "confidence": 0.93}], "vector": [...]}
 * "image_tags" and "vector" are optional. Without a vector the text is embedded
 * through `space`; ads that cannot be embedded are skipped and counted.
 */
inline AdPoolIndex read_pool(std::istream &in, const EmbeddingSpace &space) {
	AdPoolIndex index;
	index.dim = space.dim();
	std::string line;
	std::size_t lineno = 0;
	while (std::getline(in, line)) {
		++lineno;
		if (trim(line).empty())
			continue;
		PooledAd ad;
		std::optional<DenseVector> vec;
		try {
			auto row = nlohmann::json::parse(line);
			ad.id = row.at("id").get<std::string>();
			ad.text = row.at("text").get<std::string>();
			if (auto it = row.find("image_tags"); it != row.end()) {
				for (const auto &t : *it) {
					ImageTag tag{t.at("tag").get<std::string>(), t.at("confidence").get<double>()};
					if (!(tag.confidence >= 0.0 && tag.confidence <= 1.0))
						throw ParseError("tag confidence outside [0, 1]", lineno);
					ad.image_tags.push_back(std::move(tag));
				}
			}
			if (auto it = row.find("vector"); it != row.end()) {
				vec = DenseVector(it->get<std::vector<double>>());
				if (vec->dim() != index.dim)
					throw ParseError("vector has dimension " + std::to_string(vec->dim()) + ", expected " +
					                     std::to_string(index.dim),
					                 lineno);
				if (vec->norm() == 0.0)
					throw ParseError("zero-norm vector", lineno);
			}
		} catch (const nlohmann::json::exception &e) {
			throw ParseError(e.what(), lineno);
		} catch (const ParseError &) {
			throw;
		} catch (const Error &e) {
			throw ParseError(e.what(), lineno);
		}
		if (!vec)
			vec = space.try_embed(ad.text);
		if (!vec) {
			++index.skipped;
			continue;
		}
		ad.text_vector = std::move(*vec);
		sort_tags(ad.image_tags);
		index.ads.push_back(std::move(ad));
	}
	if (index.empty())
		throw Error("ad pool has no usable ads");
	return index;
}

inline AdPoolIndex build_index(const std::filesystem::path &pool_file, const EmbeddingSpace &space) {
	std::ifstream in(pool_file);
	if (!in)
		throw Error("cannot open " + pool_file.string());
	try {
		return read_pool(in, space);
	} catch (const ParseError &e) {
		throw ParseError(pool_file.string() + ": " + e.what());
	}
}

/// Writes the pool format with every vector materialized; reading it back is lossless.
inline void write_pool(std::ostream &out, const AdPoolIndex &index) {
	for (const auto &ad : index.ads) {
		nlohmann::ordered_json row;
		row["id"] = ad.id;
		row["text"] = ad.text;
		row["image_tags"] = nlohmann::ordered_json::array();
		for (const auto &t : ad.image_tags)
			row["image_tags"].push_back({{"tag", t.tag}, {"confidence", t.confidence}});
		row["vector"] = std::vector<double>(ad.text_vector.values().begin(), ad.text_vector.values().end());
		out << row.dump() << '\n';
	}
}

struct SimilarAd {
	const PooledAd *ad = nullptr;
	double relevance = 0.0;
};

/// Exact scan for the `m` ads most similar to `ad_vector`, best first; ties go to the smaller id.
inline std::vector<SimilarAd> retrieve_similar(const AdPoolIndex &index, const DenseVector &ad_vector,
                                               std::size_t m) {
	std::vector<SimilarAd> all;
	all.reserve(index.size());
	for (const auto &ad : index.ads)
		all.push_back({&ad, cosine(ad.text_vector, ad_vector)});
	auto better = [](const SimilarAd &a, const SimilarAd &b) {
		if (a.relevance != b.relevance)
			return a.relevance > b.relevance;
		return a.ad->id < b.ad->id;
	};
	std::size_t k = std::min(m, all.size());
	std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end(), better);
	all.resize(k);
	return all;
}

/// Thresholds at or below this value accept every item, embeddable or not.
inline constexpr double accept_all_similarity = -1.0;

/*
 * Image-tag augmentation. Walks the similar ads in relevance order and each ad's
 * tags in confidence order, accepting a tag when it is at least `min_tag_sim`
 * similar to some word of that ad's own text. Tags already in `existing` or
 * already accepted are passed over without using up the budget.
 */
template <TermVectors S>
std::vector<std::string> select_tags(std::span<const SimilarAd> similar, const S &store, double min_tag_sim,
                                     std::size_t max_tags, const std::unordered_set<std::string> &existing = {}) {
	std::vector<std::string> selected;
	if (max_tags == 0)
		return selected;
	std::unordered_set<std::string> taken(existing);
	for (const auto &s : similar) {
		std::vector<DenseVector> word_vectors;
		for (const auto &w : distinct_tokens(s.ad->text))
			if (const DenseVector *v = store.find(w))
				word_vectors.push_back(*v);
		for (const auto &t : s.ad->image_tags) {
			std::string tag = normalize_term(t.tag);
			if (tag.empty() || taken.count(tag))
				continue;
			bool accept = min_tag_sim <= accept_all_similarity;
			if (!accept) {
				if (auto tv = term_vector(store, tag))
					for (const auto &wv : word_vectors)
						if (cosine(*tv, wv) >= min_tag_sim) {
							accept = true;
							break;
						}
			}
			if (!accept)
				continue;
			taken.insert(tag);
			selected.push_back(std::move(tag));
			if (selected.size() == max_tags)
				return selected;
		}
	}
	return selected;
}

/*
 * Word augmentation. Walks the POS-filtered candidate words of each similar ad in
 * occurrence order, accepting a word whose similarity to the input ad reaches
 * `min_word_sim`. Words in `existing` or already accepted are skipped.
 * Accepted words are numbered by selection order.
 */
template <TermVectors S>
std::vector<CandidateTerm> select_words(std::span<const SimilarAd> similar, const DenseVector &input_ad_vector,
                                        const S &store, const PosTagger &tagger, double min_word_sim,
                                        std::size_t max_words,
                                        const std::unordered_set<std::string> &existing = {}) {
	std::vector<CandidateTerm> selected;
	if (max_words == 0)
		return selected;
	std::unordered_set<std::string> taken(existing);
	for (const auto &s : similar) {
		for (auto &w : extract_candidates(s.ad->text, tagger, Origin::NeighborText)) {
			if (taken.count(w.term))
				continue;
			bool accept = min_word_sim <= accept_all_similarity;
			if (!accept)
				if (auto v = term_vector(store, w.term))
					accept = cosine(input_ad_vector, *v) >= min_word_sim;
			if (!accept)
				continue;
			taken.insert(w.term);
			w.position = selected.size();
			selected.push_back(std::move(w));
			if (selected.size() == max_words)
				return selected;
		}
	}
	return selected;
}

/// Appends tag and word vertices and links each new vertex by the usual threshold rule.
/// Existing vertices and edges are left as they are.
template <TermVectors S>
TokenGraph augment_graph(TokenGraph graph, std::span<const std::string> tags, std::span<const CandidateTerm> words,
                         const S &store, double edge_threshold) {
	const std::size_t old_size = graph.size();
	for (std::size_t i = 0; i < tags.size(); ++i)
		if (!graph.index_of(tags[i]))
			graph.add_vertex({tags[i], Pos::Noun, i, Origin::NeighborTag});
	for (const auto &w : words)
		if (!graph.index_of(w.term))
			graph.add_vertex({w.term, w.pos, w.position, Origin::NeighborText});
	graph.augmented = true;
	if (graph.size() == old_size)
		return graph;
	std::vector<std::optional<DenseVector>> vectors;
	vectors.reserve(graph.size());
	for (const auto &v : graph.vertices())
		vectors.push_back(term_vector(store, v.term));
	detail::connect_vertices(graph, vectors, old_size, edge_threshold);
	return graph;
}

inline std::unordered_set<std::string> vertex_terms(const TokenGraph &graph) {
	std::unordered_set<std::string> out;
	for (const auto &v : graph.vertices())
		out.insert(v.term);
	return out;
}

} // namespace vtrank
