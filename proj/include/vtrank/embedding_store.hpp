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
#include <charconv>
#include <cmath>
#include <concepts>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "common.hpp"

namespace vtrank {

/// Fixed-dimension real vector. Entries are always finite.
class DenseVector {
public:
	DenseVector() = default;

	explicit DenseVector(std::vector<double> values) : m_values(std::move(values)) {
		for (double v : m_values)
			if (!std::isfinite(v))
				throw Error("vector entry is not finite");
	}

	DenseVector(std::initializer_list<double> values) : DenseVector(std::vector<double>(values)) {}

	std::size_t dim() const noexcept { return m_values.size(); }
	bool empty() const noexcept { return m_values.empty(); }
	std::span<const double> values() const noexcept { return m_values; }
	double operator[](std::size_t i) const { return m_values[i]; }

	double norm() const noexcept {
		double s = 0.0;
		for (double v : m_values)
			s += v * v;
		return std::sqrt(s);
	}

	DenseVector scaled(double alpha) const {
		std::vector<double> out(m_values);
		for (double &v : out)
			v *= alpha;
		return DenseVector(std::move(out));
	}

	friend bool operator==(const DenseVector &, const DenseVector &) = default;

private:
	std::vector<double> m_values;
};

inline double dot(const DenseVector &u, const DenseVector &v) {
	if (u.dim() != v.dim())
		throw Error("dimension mismatch: " + std::to_string(u.dim()) + " vs " + std::to_string(v.dim()));
	double s = 0.0;
	for (std::size_t i = 0; i < u.dim(); ++i)
		s += u[i] * v[i];
	return s;
}

/// dot(u,v) / (|u| |v|). Throws on dimension mismatch or a zero-norm argument.
inline double cosine(const DenseVector &u, const DenseVector &v) {
	double d = dot(u, v);
	double nu = u.norm(), nv = v.norm();
	if (nu == 0.0 || nv == 0.0)
		throw Error("cosine of a zero-norm vector");
	return std::clamp(d / (nu * nv), -1.0, 1.0);
}

/// Anything that maps a term to a vector in one fixed-dimension space.
template <class S>
concept TermVectors = requires(const S &s, std::string_view key) {
	{ s.find(key) } -> std::same_as<const DenseVector *>;
	{ s.dim() } -> std::convertible_to<std::size_t>;
};

namespace detail {

/// Storage shared by both store kinds; `KeyFn` canonicalizes keys on insert and lookup.
template <std::string (*KeyFn)(std::string_view)>
class VectorTable {
public:
	explicit VectorTable(std::size_t dim = 0) : m_dim(dim) {}

	std::size_t dim() const noexcept { return m_dim; }
	std::size_t size() const noexcept { return m_entries.size(); }
	bool empty() const noexcept { return m_entries.empty(); }

	/// Adds or replaces an entry. The first insert fixes the dimension when it is still 0.
	void insert(std::string_view key, DenseVector vec) {
		if (m_dim == 0)
			m_dim = vec.dim();
		if (vec.dim() != m_dim)
			throw Error("vector for '" + std::string(key) + "' has dimension " + std::to_string(vec.dim()) +
			            ", expected " + std::to_string(m_dim));
		if (vec.norm() == 0.0)
			throw Error("zero-norm vector for '" + std::string(key) + "'");
		m_entries.insert_or_assign(KeyFn(key), std::move(vec));
	}

	const DenseVector *find(std::string_view key) const {
		auto it = m_entries.find(KeyFn(key));
		return it == m_entries.end() ? nullptr : &it->second;
	}

	bool contains(std::string_view key) const { return find(key) != nullptr; }

	/// Entries sorted by key.
	std::vector<std::pair<std::string, const DenseVector *>> sorted_entries() const {
		std::vector<std::pair<std::string, const DenseVector *>> out;
		out.reserve(m_entries.size());
		for (const auto &[k, v] : m_entries)
			out.emplace_back(k, &v);
		std::sort(out.begin(), out.end(), [](const auto &a, const auto &b) { return a.first < b.first; });
		return out;
	}

private:
	std::size_t m_dim;
	std::unordered_map<std::string, DenseVector> m_entries;
};

inline std::string word_key(std::string_view s) { return to_lower(trim(s)); }
inline std::string sentence_key(std::string_view s) { return normalize_whitespace(s); }

inline std::optional<double> parse_double(std::string_view s) {
	double v = 0.0;
	auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
	if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
		return std::nullopt;
	return v;
}

inline std::optional<std::size_t> parse_size(std::string_view s) {
	std::size_t v = 0;
	auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
	if (ec != std::errc() || ptr != s.data() + s.size())
		return std::nullopt;
	return v;
}

inline void append_double(std::string &out, double v) {
	char buf[32];
	auto res = std::to_chars(buf, buf + sizeof(buf), v);
	out.append(buf, res.ptr);
}

inline std::ifstream open_input(const std::filesystem::path &path) {
	std::ifstream in(path);
	if (!in)
		throw Error("cannot open " + path.string());
	return in;
}

} // namespace detail

/// Word vectors keyed by lowercase token.
class WordEmbeddingStore : public detail::VectorTable<detail::word_key> {
public:
	explicit WordEmbeddingStore(std::size_t dim = 0, std::string name = {})
		: VectorTable(dim), m_name(std::move(name)) {}

	const std::string &name() const noexcept { return m_name; }

private:
	std::string m_name;
};

/// Precomputed text vectors keyed by whitespace-normalized text (case preserved).
class SentenceEmbeddingStore : public detail::VectorTable<detail::sentence_key> {
public:
	using VectorTable::VectorTable;
};

static_assert(TermVectors<WordEmbeddingStore>);
static_assert(TermVectors<SentenceEmbeddingStore>);

/*
 * Word-vector text format: optional "COUNT DIM" header, then one row per token,
 * "token f1 f2 ... fD". The dimension comes from the header or the first row;
 * later rows with a different length are rejected. A repeated token keeps the
 * vector of its last row.
 */
inline WordEmbeddingStore read_word_vectors(std::istream &in, std::string name = {}) {
	WordEmbeddingStore store(0, std::move(name));
	std::size_t dim = 0;
	std::string line;
	std::size_t lineno = 0;
	bool first = true;
	while (std::getline(in, line)) {
		++lineno;
		auto fields = split_whitespace(line);
		if (fields.empty())
			continue;
		if (first) {
			first = false;
			if (fields.size() == 2 && detail::parse_size(fields[0]) && detail::parse_size(fields[1])) {
				dim = *detail::parse_size(fields[1]);
				if (dim == 0)
					throw ParseError("header declares dimension 0", lineno);
				continue;
			}
		}
		if (fields.size() < 2)
			throw ParseError("row has no vector components", lineno);
		std::size_t row_dim = fields.size() - 1;
		if (dim == 0)
			dim = row_dim;
		if (row_dim != dim)
			throw ParseError("expected " + std::to_string(dim) + " components, found " + std::to_string(row_dim), lineno);
		std::vector<double> values;
		values.reserve(row_dim);
		for (std::size_t i = 1; i < fields.size(); ++i) {
			auto v = detail::parse_double(fields[i]);
			if (!v)
				throw ParseError("bad number '" + std::string(fields[i]) + "'", lineno);
			values.push_back(*v);
		}
		try {
			store.insert(fields[0], DenseVector(std::move(values)));
		} catch (const ParseError &) {
			throw;
		} catch (const Error &e) {
			throw ParseError(e.what(), lineno);
		}
	}
	if (store.empty())
		throw ParseError("word-vector file has no rows");
	return store;
}

inline WordEmbeddingStore load_word_vectors(const std::filesystem::path &path) {
	auto in = detail::open_input(path);
	try {
		return read_word_vectors(in, path.filename().string());
	} catch (const ParseError &e) {
		throw ParseError(path.string() + ": " + e.what());
	}
}

/// Writes the text format with a header line. Numbers use shortest round-trip form.
inline void write_word_vectors(std::ostream &out, const WordEmbeddingStore &store) {
	out << store.size() << ' ' << store.dim() << '\n';
	std::string row;
	for (const auto &[key, vec] : store.sorted_entries()) {
		row = key;
		for (double v : vec->values()) {
			row.push_back(' ');
			detail::append_double(row, v);
		}
		row.push_back('\n');
		out << row;
	}
}

/// JSON Lines, one {"key": string, "vector": [numbers]} per line.
inline SentenceEmbeddingStore read_sentence_vectors(std::istream &in) {
	SentenceEmbeddingStore store;
	std::string line;
	std::size_t lineno = 0;
	while (std::getline(in, line)) {
		++lineno;
		if (trim(line).empty())
			continue;
		try {
			auto row = nlohmann::json::parse(line);
			const auto &key = row.at("key").get_ref<const std::string &>();
			auto values = row.at("vector").get<std::vector<double>>();
			if (values.empty())
				throw Error("empty vector");
			store.insert(key, DenseVector(std::move(values)));
		} catch (const nlohmann::json::exception &e) {
			throw ParseError(e.what(), lineno);
		} catch (const Error &e) {
			throw ParseError(e.what(), lineno);
		}
	}
	if (store.empty())
		throw ParseError("sentence-embedding file has no rows");
	return store;
}

inline SentenceEmbeddingStore load_sentence_vectors(const std::filesystem::path &path) {
	auto in = detail::open_input(path);
	try {
		return read_sentence_vectors(in);
	} catch (const ParseError &e) {
		throw ParseError(path.string() + ": " + e.what());
	}
}

/// Arithmetic mean of the in-vocabulary token vectors. Out-of-vocabulary tokens are skipped.
template <TermVectors S>
DenseVector embed_text(const S &store, std::span<const std::string> tokens) {
	std::vector<double> sum(store.dim(), 0.0);
	std::size_t found = 0;
	for (const auto &tok : tokens) {
		const DenseVector *v = store.find(tok);
		if (!v)
			continue;
		for (std::size_t i = 0; i < sum.size(); ++i)
			sum[i] += (*v)[i];
		++found;
	}
	if (found == 0)
		throw Error("no embeddable tokens");
	for (double &x : sum)
		x /= static_cast<double>(found);
	return DenseVector(std::move(sum));
}

/// Vector for a vocabulary term: the direct entry, else the mean of its space-separated parts.
/// Returns nullopt when nothing is embeddable or the mean cancels to zero.
template <TermVectors S>
std::optional<DenseVector> term_vector(const S &store, std::string_view term) {
	if (const DenseVector *v = store.find(term))
		return *v;
	auto parts = split_whitespace(term);
	if (parts.size() < 2)
		return std::nullopt;
	std::vector<std::string> tokens(parts.begin(), parts.end());
	try {
		DenseVector mean = embed_text(store, tokens);
		if (mean.norm() == 0.0)
			return std::nullopt;
		return mean;
	} catch (const Error &) {
		return std::nullopt;
	}
}

} // namespace vtrank
