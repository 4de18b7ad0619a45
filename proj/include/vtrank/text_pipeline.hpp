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
#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "common.hpp"
#include "pos_lexicon_data.hpp"

namespace vtrank {

enum class Pos { Noun, Propn, Verb, Other };

/// Where a graph vertex came from. Declaration order is the tie-break order.
enum class Origin { AdText, NeighborText, NeighborTag };

inline std::string_view to_string(Pos p) {
	switch (p) {
	case Pos::Noun: return "NOUN";
	case Pos::Propn: return "PROPN";
	case Pos::Verb: return "VERB";
	case Pos::Other: break;
	}
	return "OTHER";
}

inline std::optional<Pos> parse_pos(std::string_view s) {
	if (s == "NOUN") return Pos::Noun;
	if (s == "PROPN") return Pos::Propn;
	if (s == "VERB") return Pos::Verb;
	if (s == "OTHER") return Pos::Other;
	return std::nullopt;
}

inline std::string_view to_string(Origin o) {
	switch (o) {
	case Origin::AdText: return "AD_TEXT";
	case Origin::NeighborText: return "NEIGHBOR_TEXT";
	case Origin::NeighborTag: break;
	}
	return "NEIGHBOR_TAG";
}

inline bool is_candidate_pos(Pos p) noexcept { return p != Pos::Other; }

struct TaggedToken {
	std::string surface;
	std::string normalized;
	Pos pos = Pos::Other;
	/// Index of the first occurrence of `normalized` in the token stream.
	std::size_t position = 0;
};

struct CandidateTerm {
	std::string term;
	Pos pos = Pos::Noun;
	std::size_t position = 0;
	Origin origin = Origin::AdText;

	friend bool operator==(const CandidateTerm &, const CandidateTerm &) = default;
};

namespace detail {

/// Decodes one UTF-8 sequence at `i`; malformed bytes decode as themselves.
inline char32_t decode_utf8(std::string_view s, std::size_t &i) {
	auto b = [&](std::size_t k) { return static_cast<unsigned char>(s[k]); };
	unsigned char c = b(i);
	std::size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : (c >> 3) == 0x1E ? 4 : 1;
	if (i + len > s.size())
		len = 1;
	char32_t cp = len == 1 ? c : len == 2 ? (c & 0x1F) : len == 3 ? (c & 0x0F) : (c & 0x07);
	for (std::size_t k = 1; k < len; ++k) {
		if ((b(i + k) & 0xC0) != 0x80) {
			++i;
			return c;
		}
		cp = (cp << 6) | (b(i + k) & 0x3F);
	}
	i += len;
	return cp;
}

/// Letters and digits. Non-ASCII code points count as letters except the common
/// punctuation and symbol blocks.
inline bool is_word_codepoint(char32_t cp) {
	if (cp < 0x80)
		return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') || (cp >= '0' && cp <= '9');
	if (cp <= 0xBF || cp == 0xD7 || cp == 0xF7)
		return false;
	if (cp >= 0x2000 && cp <= 0x2BFF) // punctuation, symbols, arrows, box drawing
		return false;
	if (cp >= 0x3000 && cp <= 0x303F)
		return false;
	if (cp >= 0xFE30 && cp <= 0xFE6F)
		return false;
	if ((cp >= 0xFF00 && cp <= 0xFF0F) || (cp >= 0xFF1A && cp <= 0xFF20))
		return false;
	return true;
}

inline bool is_apostrophe(char32_t cp) { return cp == '\'' || cp == 0x2019; }

inline bool all_digits(std::string_view s) {
	return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

} // namespace detail

/*
 * Splits text into word tokens. Punctuation, symbols and hyphens separate words;
 * an apostrophe between two word characters stays inside the word. Tokens made
 * only of digits are dropped. Every occurrence of a normalized form carries the
 * index of its first occurrence.
 */
inline std::vector<TaggedToken> tokenize(std::string_view text) {
	std::vector<TaggedToken> out;
	std::unordered_map<std::string, std::size_t> first_seen;
	std::string word;

	auto flush = [&] {
		if (word.empty())
			return;
		if (!detail::all_digits(word)) {
			TaggedToken tok;
			tok.surface = word;
			tok.normalized = to_lower(word);
			auto [it, inserted] = first_seen.try_emplace(tok.normalized, out.size());
			tok.position = it->second;
			out.push_back(std::move(tok));
		}
		word.clear();
	};

	std::size_t i = 0;
	while (i < text.size()) {
		std::size_t start = i;
		char32_t cp = detail::decode_utf8(text, i);
		if (detail::is_word_codepoint(cp)) {
			word.append(text.substr(start, i - start));
			continue;
		}
		if (detail::is_apostrophe(cp) && !word.empty() && i < text.size()) {
			std::size_t peek = i;
			if (detail::is_word_codepoint(detail::decode_utf8(text, peek))) {
				word.push_back('\'');
				continue;
			}
		}
		flush();
	}
	flush();
	return out;
}

/// Source of part-of-speech tags for single tokens.
class PosTagger {
public:
	virtual ~PosTagger() = default;
	virtual Pos tag(const TaggedToken &token) const = 0;
};

/*
 * Dictionary tagger. Known words get their lexicon tag; unknown words fall back
 * to heuristics: a plural or inflected form of a known word inherits its tag,
 * capitalized words are proper nouns, and a few derivational suffixes mark
 * nouns and verbs. Anything else is OTHER.
 */
class LexiconTagger : public PosTagger {
public:
	LexiconTagger() = default;

	/// Tagger preloaded with the bundled English lexicon.
	static LexiconTagger with_default_lexicon() {
		LexiconTagger t;
		t.add_words(lexicon_data::other_words, Pos::Other);
		t.add_words(lexicon_data::verb_words, Pos::Verb);
		t.add_words(lexicon_data::noun_words, Pos::Noun);
		t.add_words(lexicon_data::propn_words, Pos::Propn);
		return t;
	}

	void add(std::string_view word, Pos pos) { m_lexicon.insert_or_assign(to_lower(word), pos); }

	void add_words(std::string_view whitespace_separated, Pos pos) {
		for (auto w : split_whitespace(whitespace_separated))
			add(w, pos);
	}

	/// Reads "token TAB POS" lines; entries override existing ones. Blank and '#' lines are skipped.
	void load(std::istream &in) {
		std::string line;
		std::size_t lineno = 0;
		while (std::getline(in, line)) {
			++lineno;
			if (!line.empty() && line.back() == '\r')
				line.pop_back();
			if (trim(line).empty() || trim(line).front() == '#')
				continue;
			auto tab = line.find('\t');
			if (tab == std::string::npos)
				throw ParseError("expected 'token<TAB>POS'", lineno);
			auto word = trim(std::string_view(line).substr(0, tab));
			auto pos = parse_pos(trim(std::string_view(line).substr(tab + 1)));
			if (word.empty() || !pos)
				throw ParseError("bad lexicon entry '" + line + "'", lineno);
			add(word, *pos);
		}
	}

	void load(const std::filesystem::path &path) {
		std::ifstream in(path);
		if (!in)
			throw Error("cannot open " + path.string());
		try {
			load(in);
		} catch (const ParseError &e) {
			throw ParseError(path.string() + ": " + e.what());
		}
	}

	std::optional<Pos> lookup(std::string_view normalized) const {
		auto it = m_lexicon.find(std::string(normalized));
		if (it == m_lexicon.end())
			return std::nullopt;
		return it->second;
	}

	std::size_t size() const noexcept { return m_lexicon.size(); }

	Pos tag(const TaggedToken &token) const override {
		const std::string &w = token.normalized;
		if (auto p = lookup(w))
			return *p;
		if (auto p = inflected(w))
			return *p;
		if (!token.surface.empty() && token.surface.front() >= 'A' && token.surface.front() <= 'Z')
			return Pos::Propn;
		return by_suffix(w);
	}

private:
	static bool ends_with(std::string_view w, std::string_view suffix) {
		return w.size() > suffix.size() + 2 && w.substr(w.size() - suffix.size()) == suffix;
	}

	std::optional<Pos> inflected(std::string_view w) const {
		auto stem_tag = [&](std::string_view suffix) -> std::optional<Pos> {
			if (w.size() <= suffix.size() + 1 || w.substr(w.size() - suffix.size()) != suffix)
				return std::nullopt;
			auto p = lookup(w.substr(0, w.size() - suffix.size()));
			if (p && is_candidate_pos(*p))
				return p;
			return std::nullopt;
		};
		if (auto p = stem_tag("es")) return p;
		if (auto p = stem_tag("s")) return p;
		if (auto p = stem_tag("ed")) return Pos::Verb;
		if (auto p = stem_tag("ing")) return Pos::Verb;
		return std::nullopt;
	}

	static Pos by_suffix(std::string_view w) {
		static constexpr std::array<std::string_view, 10> adjective = {"ly", "ous", "ful", "ive", "able",
		                                                               "ible", "less", "ical", "est", "ish"};
		static constexpr std::array<std::string_view, 13> noun = {"tion", "sion", "ment", "ness", "ity", "ship",
		                                                          "ance", "ence", "ism", "ist", "ery", "ware", "hood"};
		static constexpr std::array<std::string_view, 4> verb = {"ize", "ise", "ify", "ing"};
		for (auto s : adjective)
			if (ends_with(w, s))
				return Pos::Other;
		for (auto s : noun)
			if (ends_with(w, s))
				return Pos::Noun;
		for (auto s : verb)
			if (ends_with(w, s))
				return Pos::Verb;
		return Pos::Other;
	}

	std::unordered_map<std::string, Pos> m_lexicon;
};

inline std::vector<TaggedToken> tag_pos(std::vector<TaggedToken> tokens, const PosTagger &tagger) {
	for (auto &t : tokens)
		t.pos = tagger.tag(t);
	return tokens;
}

/// Keeps nouns, proper nouns and verbs, one entry per normalized form at its earliest position.
inline std::vector<CandidateTerm> candidate_filter(std::span<const TaggedToken> tagged,
                                                   Origin origin = Origin::AdText) {
	std::vector<CandidateTerm> out;
	std::unordered_set<std::string> seen;
	for (const auto &t : tagged) {
		if (!is_candidate_pos(t.pos) || !seen.insert(t.normalized).second)
			continue;
		out.push_back({t.normalized, t.pos, t.position, origin});
	}
	std::stable_sort(out.begin(), out.end(),
	                 [](const CandidateTerm &a, const CandidateTerm &b) { return a.position < b.position; });
	return out;
}

inline std::vector<CandidateTerm> extract_candidates(std::string_view text, const PosTagger &tagger,
                                                     Origin origin = Origin::AdText) {
	auto tagged = tag_pos(tokenize(text), tagger);
	return candidate_filter(tagged, origin);
}

/// Distinct normalized tokens in order of first occurrence.
inline std::vector<std::string> distinct_tokens(std::string_view text) {
	std::vector<std::string> out;
	std::unordered_set<std::string> seen;
	for (auto &t : tokenize(text))
		if (seen.insert(t.normalized).second)
			out.push_back(std::move(t.normalized));
	return out;
}

} // namespace vtrank
