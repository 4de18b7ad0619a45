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
#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "embedding_store.hpp"
#include "text_pipeline.hpp"

namespace vtrank {

/// Undirected weighted graph over candidate terms. Weights are stored densely; graphs
/// hold tens of vertices.
class TokenGraph {
public:
	TokenGraph() = default;

	explicit TokenGraph(std::vector<CandidateTerm> vertices)
		: m_vertices(std::move(vertices)), m_weights(m_vertices.size() * m_vertices.size(), 0.0) {}

	std::size_t size() const noexcept { return m_vertices.size(); }
	bool empty() const noexcept { return m_vertices.empty(); }

	const std::vector<CandidateTerm> &vertices() const noexcept { return m_vertices; }
	const CandidateTerm &vertex(std::size_t i) const { return m_vertices.at(i); }

	double weight(std::size_t i, std::size_t j) const { return m_weights[i * size() + j]; }

	/// Sets e_ij = e_ji. Self loops are ignored.
	void set_weight(std::size_t i, std::size_t j, double w) {
		if (i == j)
			return;
		m_weights[i * size() + j] = w;
		m_weights[j * size() + i] = w;
	}

	/// Appends a vertex with no edges and returns its index.
	std::size_t add_vertex(CandidateTerm term) {
		std::size_t n = size();
		std::vector<double> grown((n + 1) * (n + 1), 0.0);
		for (std::size_t i = 0; i < n; ++i)
			std::copy_n(m_weights.begin() + i * n, n, grown.begin() + i * (n + 1));
		m_weights = std::move(grown);
		m_vertices.push_back(std::move(term));
		return n;
	}

	std::optional<std::size_t> index_of(std::string_view term) const {
		for (std::size_t i = 0; i < size(); ++i)
			if (m_vertices[i].term == term)
				return i;
		return std::nullopt;
	}

	struct Edge {
		std::size_t i, j;
		double weight;
	};

	/// Edges with i < j in row-major order.
	std::vector<Edge> edges() const {
		std::vector<Edge> out;
		for (std::size_t i = 0; i < size(); ++i)
			for (std::size_t j = i + 1; j < size(); ++j)
				if (weight(i, j) > 0.0)
					out.push_back({i, j, weight(i, j)});
		return out;
	}

	bool augmented = false;

private:
	std::vector<CandidateTerm> m_vertices;
	std::vector<double> m_weights;
};

struct RankConfig {
	double damping = 0.8;
	int iterations = 80;
	double edge_threshold = 0.9;
	double convergence_epsilon = 1e-6;

	void validate() const {
		if (!(damping > 0.0 && damping < 1.0))
			throw ConfigError("damping must lie in (0, 1)");
		if (iterations < 1)
			throw ConfigError("iterations must be at least 1");
		if (!(convergence_epsilon >= 0.0))
			throw ConfigError("convergence epsilon must be non-negative");
	}
};

/// Per-vertex restart weights, aligned with the graph's vertex order. Entries are >= 0.
struct BiasVector {
	std::vector<double> values;

	std::size_t size() const noexcept { return values.size(); }
	double operator[](std::size_t i) const { return values[i]; }

	static BiasVector uniform(std::size_t n, double value = 1.0) { return {std::vector<double>(n, value)}; }
};

/// Elementwise product of two bias vectors.
inline BiasVector combine_biases(const BiasVector &a, const BiasVector &b) {
	if (a.size() != b.size())
		throw Error("bias vectors differ in length");
	BiasVector out{std::vector<double>(a.size())};
	for (std::size_t i = 0; i < a.size(); ++i)
		out.values[i] = a[i] * b[i];
	return out;
}

struct RankScores {
	std::vector<double> values;
	int iterations_run = 0;
	bool converged = false;
};

namespace detail {

/// Adds an edge for every pair (i, j) with j in [from, n) and i < j whose vectors
/// are at least `threshold` similar. Similarities are clamped to be non-negative.
inline void connect_vertices(TokenGraph &graph, std::span<const std::optional<DenseVector>> vectors,
                             std::size_t from, double threshold) {
	for (std::size_t j = from; j < graph.size(); ++j) {
		if (!vectors[j])
			continue;
		for (std::size_t i = 0; i < j; ++i) {
			if (!vectors[i])
				continue;
			double sim = cosine(*vectors[i], *vectors[j]);
			if (sim >= threshold && sim > 0.0)
				graph.set_weight(i, j, sim);
		}
	}
}

} // namespace detail

/// One vertex per candidate; e_ij = cosine(w_i, w_j) when it reaches `threshold`.
/// Candidates without a vector stay isolated.
template <TermVectors S>
TokenGraph build_token_graph(std::vector<CandidateTerm> candidates, const S &store, double threshold) {
	if (candidates.empty())
		throw Error("empty graph");
	TokenGraph graph(std::move(candidates));
	std::vector<std::optional<DenseVector>> vectors;
	vectors.reserve(graph.size());
	for (const auto &v : graph.vertices())
		vectors.push_back(term_vector(store, v.term));
	detail::connect_vertices(graph, vectors, 0, threshold);
	return graph;
}

/// bias_i = max(0, cosine(ad, w_i)); terms without a vector get 0.
template <TermVectors S>
BiasVector self_bias(std::span<const CandidateTerm> candidates, const DenseVector &ad_vector, const S &store) {
	BiasVector bias{std::vector<double>(candidates.size(), 0.0)};
	for (std::size_t i = 0; i < candidates.size(); ++i)
		if (auto v = term_vector(store, candidates[i].term))
			bias.values[i] = std::max(0.0, cosine(ad_vector, *v));
	return bias;
}

/*
 * Biased TextRank fixed-point iteration:
 *
 *     v_i <- bias_i (1 - d) + d * sum_j (e_ij / sum_k e_kj) v_j
 *
 * Scores start at 1 and are updated synchronously. Iteration stops after
 * `iterations` rounds or once the largest per-vertex change drops below
 * `convergence_epsilon`. A uniform bias of 1 gives unbiased TextRank.
 */
inline RankScores rank(const TokenGraph &graph, const RankConfig &config, const BiasVector &bias) {
	config.validate();
	const std::size_t n = graph.size();
	if (bias.size() != n)
		throw Error("bias length " + std::to_string(bias.size()) + " does not match " + std::to_string(n) +
		            " vertices");

	// transition[i * n + j] = e_ij / sum_k e_kj
	std::vector<double> transition(n * n, 0.0);
	for (std::size_t j = 0; j < n; ++j) {
		double col = 0.0;
		for (std::size_t k = 0; k < n; ++k)
			col += graph.weight(k, j);
		if (col <= 0.0)
			continue;
		for (std::size_t i = 0; i < n; ++i)
			transition[i * n + j] = graph.weight(i, j) / col;
	}

	const double d = config.damping;
	RankScores out;
	out.values.assign(n, 1.0);
	std::vector<double> next(n);
	for (int it = 0; it < config.iterations; ++it) {
		double max_delta = 0.0;
		for (std::size_t i = 0; i < n; ++i) {
			double flow = 0.0;
			for (std::size_t j = 0; j < n; ++j)
				flow += transition[i * n + j] * out.values[j];
			next[i] = bias[i] * (1.0 - d) + d * flow;
			max_delta = std::max(max_delta, std::abs(next[i] - out.values[i]));
		}
		out.values.swap(next);
		out.iterations_run = it + 1;
		if (max_delta < config.convergence_epsilon) {
			out.converged = true;
			break;
		}
	}
	return out;
}

/// Strict ordering used for keyword selection: higher score, then origin
/// (ad text, neighbor text, neighbor tag), then earlier position, then term.
inline bool ranks_before(const CandidateTerm &a, double score_a, const CandidateTerm &b, double score_b) {
	if (score_a != score_b)
		return score_a > score_b;
	if (a.origin != b.origin)
		return a.origin < b.origin;
	if (a.position != b.position)
		return a.position < b.position;
	return a.term < b.term;
}

/// Vertex indices ordered best-first; at most `k` of them.
inline std::vector<std::size_t> top_k(const TokenGraph &graph, const RankScores &scores, std::size_t k) {
	if (scores.values.size() != graph.size())
		throw Error("score vector does not match graph");
	std::vector<std::size_t> order(graph.size());
	std::iota(order.begin(), order.end(), std::size_t{0});
	std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
		return ranks_before(graph.vertex(a), scores.values[a], graph.vertex(b), scores.values[b]);
	});
	order.resize(std::min(k, order.size()));
	return order;
}

inline std::size_t select_keyword_index(const TokenGraph &graph, const RankScores &scores) {
	if (graph.empty())
		throw Error("empty graph");
	return top_k(graph, scores, 1).front();
}

inline const CandidateTerm &select_keyword(const TokenGraph &graph, const RankScores &scores) {
	return graph.vertex(select_keyword_index(graph, scores));
}

} // namespace vtrank
