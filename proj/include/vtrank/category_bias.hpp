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
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "embedding_space.hpp"
#include "graph_ranker.hpp"

namespace vtrank {

/// Flattened category phrases with their vectors, index-aligned.
struct CategorySet {
	std::vector<std::string> phrases;
	std::vector<DenseVector> vectors;
	/// Phrases dropped because no vector could be built for them.
	std::size_t skipped = 0;

	std::size_t size() const noexcept { return phrases.size(); }
	bool empty() const noexcept { return phrases.empty(); }

	void add(std::string phrase, DenseVector vec) {
		if (std::find(phrases.begin(), phrases.end(), phrase) != phrases.end())
			throw Error("duplicate category phrase '" + phrase + "'");
		phrases.push_back(std::move(phrase));
		vectors.push_back(std::move(vec));
	}
};

struct CategoryBiasConfig {
	double floor = 0.4;

	void validate() const {
		if (!(floor >= 0.0 && floor <= 1.0))
			throw ConfigError("category bias floor must lie in [0, 1]");
	}
};

/// One phrase per line; '#' starts a comment line. Whitespace is normalized and
/// repeated phrases are kept once.
inline std::vector<std::string> read_category_phrases(std::istream &in) {
	std::vector<std::string> out;
	std::unordered_set<std::string> seen;
	std::string line;
	while (std::getline(in, line)) {
		auto phrase = normalize_whitespace(line);
		if (phrase.empty() || phrase.front() == '#')
			continue;
		if (seen.insert(phrase).second)
			out.push_back(std::move(phrase));
	}
	return out;
}

/// Phrase vectors come from the sentence store when present, else from the mean of word vectors.
inline CategorySet build_category_set(std::span<const std::string> phrases, const EmbeddingSpace &space) {
	CategorySet cats;
	for (const auto &p : phrases) {
		if (auto v = space.try_embed(p))
			cats.add(p, std::move(*v));
		else
			++cats.skipped;
	}
	return cats;
}

inline CategorySet load_categories(const std::filesystem::path &path, const EmbeddingSpace &space) {
	std::ifstream in(path);
	if (!in)
		throw Error("cannot open " + path.string());
	auto phrases = read_category_phrases(in);
	auto cats = build_category_set(phrases, space);
	if (cats.empty())
		throw Error(path.string() + ": no embeddable category phrases");
	return cats;
}

struct CategoryMatch {
	std::string phrase;
	double score = 0.0;
	std::size_t index = 0;
};

/// Closest category by cosine to the ad vector; equal scores resolve to the smaller phrase.
inline CategoryMatch infer_category(const DenseVector &ad_vector, const CategorySet &cats) {
	if (cats.empty())
		throw Error("empty category set");
	CategoryMatch best;
	bool have = false;
	for (std::size_t i = 0; i < cats.size(); ++i) {
		double s = cosine(ad_vector, cats.vectors[i]);
		if (!have || s > best.score || (s == best.score && cats.phrases[i] < best.phrase)) {
			best = {cats.phrases[i], s, i};
			have = true;
		}
	}
	return best;
}

/// bias_i = cosine(category, w_i), zeroed when below the floor (and so when negative).
template <TermVectors S>
BiasVector category_bias(const DenseVector &category_vector, std::span<const CandidateTerm> vertices,
                         const S &store, const CategoryBiasConfig &config = {}) {
	config.validate();
	BiasVector bias{std::vector<double>(vertices.size(), 0.0)};
	for (std::size_t i = 0; i < vertices.size(); ++i) {
		auto v = term_vector(store, vertices[i].term);
		if (!v)
			continue;
		double s = std::max(0.0, cosine(category_vector, *v));
		bias.values[i] = s < config.floor ? 0.0 : s;
	}
	return bias;
}

} // namespace vtrank
