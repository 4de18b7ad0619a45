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
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "embedding_store.hpp"
#include "text_pipeline.hpp"

namespace vtrank {

/// Document frequencies over a reference corpus.
class DocumentFrequencies {
public:
	std::size_t num_docs() const noexcept { return m_docs; }

	std::size_t df(const std::string &term) const {
		auto it = m_df.find(term);
		return it == m_df.end() ? 0 : it->second;
	}

	/// Counts each distinct token of `text` once.
	void add_document(std::string_view text) {
		++m_docs;
		for (const auto &t : distinct_tokens(text))
			++m_df[t];
	}

	void set(std::string term, std::size_t df) { m_df[std::move(term)] = df; }
	void set_num_docs(std::size_t n) { m_docs = n; }

	/// log(N / df); unseen terms count as df = 1.
	double idf(const std::string &term) const {
		double d = static_cast<double>(std::max<std::size_t>(df(term), 1));
		return std::log(static_cast<double>(std::max<std::size_t>(m_docs, 1)) / d);
	}

	/*
	 * Text format:
	 *   #docs<TAB>N
	 *   term<TAB>df
	 *   ...
	 * The "#docs" line is required; terms are written in sorted order.
	 */
	void write(std::ostream &out) const {
		out << "#docs\t" << m_docs << '\n';
		std::map<std::string, std::size_t> sorted(m_df.begin(), m_df.end());
		for (const auto &[t, n] : sorted)
			out << t << '\t' << n << '\n';
	}

	static DocumentFrequencies read(std::istream &in) {
		DocumentFrequencies out;
		bool have_docs = false;
		std::string line;
		std::size_t lineno = 0;
		while (std::getline(in, line)) {
			++lineno;
			if (trim(line).empty())
				continue;
			auto tab = line.find('\t');
			if (tab == std::string::npos)
				throw ParseError("expected 'term<TAB>count'", lineno);
			auto key = std::string(trim(std::string_view(line).substr(0, tab)));
			auto count = detail::parse_size(trim(std::string_view(line).substr(tab + 1)));
			if (!count || key.empty())
				throw ParseError("bad entry '" + line + "'", lineno);
			if (key == "#docs") {
				out.m_docs = *count;
				have_docs = true;
			} else {
				out.m_df[to_lower(key)] = *count;
			}
		}
		if (!have_docs)
			throw ParseError("missing '#docs' line");
		return out;
	}

	static DocumentFrequencies load(const std::filesystem::path &path) {
		std::ifstream in(path);
		if (!in)
			throw Error("cannot open " + path.string());
		try {
			return read(in);
		} catch (const ParseError &e) {
			throw ParseError(path.string() + ": " + e.what());
		}
	}

private:
	std::size_t m_docs = 0;
	std::unordered_map<std::string, std::size_t> m_df;
};

struct TfidfResult {
	CandidateTerm term;
	double score = 0.0;
};

/// POS-filtered candidate with the largest tf * log(N / df); ties go to the earlier term.
inline TfidfResult tfidf_keyword(std::string_view text, const PosTagger &tagger, const DocumentFrequencies &df) {
	auto tagged = tag_pos(tokenize(text), tagger);
	std::unordered_map<std::string, std::size_t> tf;
	for (const auto &t : tagged)
		++tf[t.normalized];
	auto candidates = candidate_filter(tagged);
	if (candidates.empty())
		throw NoKeywordError();
	TfidfResult best;
	bool have = false;
	for (const auto &c : candidates) {
		double s = static_cast<double>(tf[c.term]) * df.idf(c.term);
		if (!have || s > best.score) {
			best = {c, s};
			have = true;
		}
	}
	return best;
}

} // namespace vtrank
