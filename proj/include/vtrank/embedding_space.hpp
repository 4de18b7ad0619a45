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

#include "embedding_store.hpp"
#include "text_pipeline.hpp"

namespace vtrank {

/// Which store answers single-term lookups first.
enum class TermSource { Word, Sentence };

inline std::optional<TermSource> parse_term_source(std::string_view s) {
	if (s == "word") return TermSource::Word;
	if (s == "sentence") return TermSource::Sentence;
	return std::nullopt;
}

/// Ad vector: the precomputed sentence vector for the whitespace-normalized text when
/// one exists, else the mean of the text's in-vocabulary word vectors.
inline DenseVector embed_ad_text(std::string_view text, const WordEmbeddingStore *words,
                                 const SentenceEmbeddingStore *sentences) {
	if (!words && !sentences)
		throw ConfigError("no embedding store configured");
	if (sentences)
		if (const DenseVector *v = sentences->find(text))
			return *v;
	if (!words)
		throw Error("no sentence vector for text and no word vectors to fall back on");
	std::vector<std::string> tokens;
	for (auto &t : tokenize(text))
		tokens.push_back(std::move(t.normalized));
	if (tokens.empty())
		throw Error("no embeddable tokens");
	return embed_text(*words, tokens);
}

/*
 * The vector space used for ranking. Terms (graph vertices, tags, category words)
 * and whole texts (ads, category phrases) must be comparable, so when both stores
 * are present they must share one dimension.
 */
class EmbeddingSpace {
public:
	EmbeddingSpace(const WordEmbeddingStore *words, const SentenceEmbeddingStore *sentences,
	               TermSource terms = TermSource::Word)
		: m_words(words), m_sentences(sentences), m_terms(terms) {
		if (!words && !sentences)
			throw ConfigError("no embedding store configured");
		if (words && sentences && words->dim() != sentences->dim())
			throw ConfigError("word vectors (dim " + std::to_string(words->dim()) + ") and sentence vectors (dim " +
			                  std::to_string(sentences->dim()) + ") must share a dimension for ranking");
	}

	std::size_t dim() const noexcept { return m_words ? m_words->dim() : m_sentences->dim(); }

	const WordEmbeddingStore *words() const noexcept { return m_words; }
	const SentenceEmbeddingStore *sentences() const noexcept { return m_sentences; }

	const DenseVector *find(std::string_view term) const {
		const DenseVector *first = nullptr;
		const DenseVector *second = nullptr;
		if (m_terms == TermSource::Word) {
			first = m_words ? m_words->find(term) : nullptr;
			if (!first && m_sentences)
				second = m_sentences->find(term);
		} else {
			first = m_sentences ? m_sentences->find(term) : nullptr;
			if (!first && m_words)
				second = m_words->find(term);
		}
		return first ? first : second;
	}

	/// Vector for a whole text; the sentence entry wins, else the mean of its token vectors.
	DenseVector embed(std::string_view text) const {
		if (m_sentences)
			if (const DenseVector *v = m_sentences->find(text))
				return *v;
		std::vector<std::string> tokens;
		for (auto &t : tokenize(text))
			tokens.push_back(std::move(t.normalized));
		if (tokens.empty())
			throw Error("no embeddable tokens");
		DenseVector v = embed_text(*this, tokens);
		if (v.norm() == 0.0)
			throw Error("text embeds to the zero vector");
		return v;
	}

	std::optional<DenseVector> try_embed(std::string_view text) const {
		try {
			return embed(text);
		} catch (const Error &) {
			return std::nullopt;
		}
	}

private:
	const WordEmbeddingStore *m_words;
	const SentenceEmbeddingStore *m_sentences;
	TermSource m_terms;
};

static_assert(TermVectors<EmbeddingSpace>);

} // namespace vtrank
