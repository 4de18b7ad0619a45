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

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vtrank {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

/// Malformed input file. Carries the 1-based line number when known (0 otherwise).
class ParseError : public Error {
public:
	ParseError(const std::string &what, std::size_t line = 0)
		: Error(line ? "line " + std::to_string(line) + ": " + what : what), m_line(line) {}

	std::size_t line() const noexcept { return m_line; }

private:
	std::size_t m_line;
};

/// Invalid configuration (bad parameter range, missing resource for a mode).
class ConfigError : public Error {
public:
	using Error::Error;
};

/// The ad text produced no rankable candidate.
class NoKeywordError : public Error {
public:
	NoKeywordError() : Error("no extractable keyword") {}
};

inline bool is_space(char c) noexcept {
	return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline std::string_view trim(std::string_view s) noexcept {
	while (!s.empty() && is_space(s.front()))
		s.remove_prefix(1);
	while (!s.empty() && is_space(s.back()))
		s.remove_suffix(1);
	return s;
}

/// Collapses runs of whitespace to one space and trims both ends.
inline std::string normalize_whitespace(std::string_view s) {
	std::string out;
	out.reserve(s.size());
	bool pending = false;
	for (char c : trim(s)) {
		if (is_space(c)) {
			pending = true;
			continue;
		}
		if (pending) {
			out.push_back(' ');
			pending = false;
		}
		out.push_back(c);
	}
	return out;
}

/// Lowercases ASCII and the Latin-1 supplement capitals (U+00C0..U+00DE, except U+00D7).
/// Other code points pass through unchanged.
inline std::string to_lower(std::string_view s) {
	std::string out(s);
	for (std::size_t i = 0; i < out.size(); ++i) {
		unsigned char c = static_cast<unsigned char>(out[i]);
		if (c >= 'A' && c <= 'Z') {
			out[i] = static_cast<char>(c - 'A' + 'a');
		} else if (c == 0xC3 && i + 1 < out.size()) {
			unsigned char n = static_cast<unsigned char>(out[i + 1]);
			if (n >= 0x80 && n <= 0x9E && n != 0x97)
				out[i + 1] = static_cast<char>(n + 0x20);
			++i;
		}
	}
	return out;
}

/// Whitespace-normalized, lowercased form used for word-level keys.
inline std::string normalize_term(std::string_view s) {
	return to_lower(normalize_whitespace(s));
}

inline std::vector<std::string_view> split_whitespace(std::string_view s) {
	std::vector<std::string_view> out;
	std::size_t i = 0;
	while (i < s.size()) {
		while (i < s.size() && is_space(s[i]))
			++i;
		std::size_t start = i;
		while (i < s.size() && !is_space(s[i]))
			++i;
		if (i > start)
			out.push_back(s.substr(start, i - start));
	}
	return out;
}

} // namespace vtrank
