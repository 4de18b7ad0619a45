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
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <numeric>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "embedding_store.hpp"

namespace vtrank {

struct EvalSample {
	std::string id;
	std::string ad_text;
	/// Normalized golden queries; never empty.
	std::vector<std::string> golden_queries;
};

/// JSON Lines: {"id": "...", "ad_text": "...", "golden_queries": ["...", ...]}.
inline std::vector<EvalSample> read_dataset(std::istream &in) {
	std::vector<EvalSample> out;
	std::string line;
	std::size_t lineno = 0;
	while (std::getline(in, line)) {
		++lineno;
		if (trim(line).empty())
			continue;
		EvalSample s;
		try {
			auto row = nlohmann::json::parse(line);
			s.id = row.at("id").get<std::string>();
			s.ad_text = row.at("ad_text").get<std::string>();
			for (const auto &q : row.at("golden_queries")) {
				auto norm = normalize_term(q.get<std::string>());
				if (!norm.empty())
					s.golden_queries.push_back(std::move(norm));
			}
		} catch (const nlohmann::json::exception &e) {
			throw ParseError(e.what(), lineno);
		}
		if (s.golden_queries.empty())
			throw ParseError("sample '" + s.id + "' has no golden queries", lineno);
		out.push_back(std::move(s));
	}
	return out;
}

inline std::vector<EvalSample> load_dataset(const std::filesystem::path &path) {
	std::ifstream in(path);
	if (!in)
		throw Error("cannot open " + path.string());
	try {
		return read_dataset(in);
	} catch (const ParseError &e) {
		throw ParseError(path.string() + ": " + e.what());
	}
}

struct MetricConfig {
	double soft_threshold = 0.8;
	/// Word vectors used only for scoring; unrelated to the ranking space. May be null.
	const WordEmbeddingStore *metric_store = nullptr;

	void validate() const {
		if (!(soft_threshold > 0.0 && soft_threshold <= 1.0))
			throw ConfigError("soft threshold must lie in (0, 1]");
	}
};

inline bool in_golden_set(std::string_view prediction, std::span<const std::string> golden) {
	return std::find(golden.begin(), golden.end(), prediction) != golden.end();
}

inline int hard_accuracy(std::string_view prediction, std::span<const std::string> golden) {
	return in_golden_set(prediction, golden) ? 1 : 0;
}

/// True when the prediction has a vector in the metric store.
inline bool metric_covers(std::string_view prediction, const MetricConfig &config) {
	return config.metric_store && term_vector(*config.metric_store, prediction).has_value();
}

/// Best cosine between the prediction and any golden query in the metric space. An exact match
/// scores 1; an uncovered prediction scores 0. Multi-word queries embed as the mean of their words.
inline double w2v_similarity(std::string_view prediction, std::span<const std::string> golden,
                             const MetricConfig &config) {
	if (in_golden_set(prediction, golden))
		return 1.0;
	if (!config.metric_store)
		return 0.0;
	auto p = term_vector(*config.metric_store, prediction);
	if (!p)
		return 0.0;
	double best = 0.0;
	bool have = false;
	for (const auto &q : golden) {
		auto v = term_vector(*config.metric_store, q);
		if (!v)
			continue;
		double s = cosine(*p, *v);
		if (!have || s > best) {
			best = s;
			have = true;
		}
	}
	return have ? best : 0.0;
}

/// 1 when the prediction is exact or its best metric-space cosine meets the threshold.
/// Uncovered predictions fall back to the hard result.
inline int soft_accuracy(std::string_view prediction, std::span<const std::string> golden,
                         const MetricConfig &config) {
	if (in_golden_set(prediction, golden))
		return 1;
	if (!metric_covers(prediction, config))
		return 0;
	return w2v_similarity(prediction, golden, config) >= config.soft_threshold ? 1 : 0;
}

struct SampleResult {
	std::string id;
	std::string prediction;
	int hard = 0;
	int soft = 0;
	double similarity = 0.0;
	bool failed = false;
	bool oov = false;
	std::string error;
};

struct MetricReport {
	std::string mode;
	std::size_t n = 0;
	double hard_accuracy = 0.0;
	double soft_accuracy = 0.0;
	double avg_w2v_similarity = 0.0;
	std::size_t failures = 0;
	std::size_t oov_predictions = 0;
	/// In dataset order.
	std::vector<SampleResult> per_sample;
};

inline SampleResult score_prediction(const EvalSample &sample, std::string prediction, const MetricConfig &config) {
	SampleResult r;
	r.id = sample.id;
	r.prediction = std::move(prediction);
	r.hard = hard_accuracy(r.prediction, sample.golden_queries);
	r.soft = soft_accuracy(r.prediction, sample.golden_queries, config);
	r.similarity = w2v_similarity(r.prediction, sample.golden_queries, config);
	r.oov = !metric_covers(r.prediction, config);
	return r;
}

/// Means over samples. Sums run in (id, prediction) order so the result does not depend
/// on dataset order.
inline void aggregate(MetricReport &report) {
	const auto &rows = report.per_sample;
	report.n = rows.size();
	std::vector<std::size_t> order(rows.size());
	std::iota(order.begin(), order.end(), std::size_t{0});
	std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
		if (rows[a].id != rows[b].id)
			return rows[a].id < rows[b].id;
		if (rows[a].prediction != rows[b].prediction)
			return rows[a].prediction < rows[b].prediction;
		return rows[a].similarity < rows[b].similarity;
	});
	double hard = 0.0, soft = 0.0, sim = 0.0;
	report.failures = report.oov_predictions = 0;
	for (std::size_t i : order) {
		hard += rows[i].hard;
		soft += rows[i].soft;
		sim += rows[i].similarity;
		report.failures += rows[i].failed ? 1 : 0;
		report.oov_predictions += (!rows[i].failed && rows[i].oov) ? 1 : 0;
	}
	double n = rows.empty() ? 1.0 : static_cast<double>(rows.size());
	report.hard_accuracy = hard / n;
	report.soft_accuracy = soft / n;
	report.avg_w2v_similarity = sim / n;
}

/*
 * Runs `extract(sample) -> std::string` over the dataset and scores every
 * prediction. An extractor exception marks the sample as a failed miss. With
 * workers > 1 samples are spread over threads, so `extract` must be safe to
 * call concurrently; the report is identical to a sequential run.
 */
template <class Extract>
MetricReport evaluate(std::span<const EvalSample> dataset, Extract &&extract, const MetricConfig &config,
                      unsigned workers = 1, std::string mode = {}) {
	config.validate();
	if (dataset.empty())
		throw Error("empty dataset");
	MetricReport report;
	report.mode = std::move(mode);
	report.per_sample.resize(dataset.size());

	auto run_one = [&](std::size_t i) {
		const EvalSample &s = dataset[i];
		try {
			report.per_sample[i] = score_prediction(s, extract(s), config);
		} catch (const std::exception &e) {
			SampleResult r;
			r.id = s.id;
			r.failed = true;
			r.error = e.what();
			report.per_sample[i] = std::move(r);
		}
	};

	workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(dataset.size())));
	if (workers == 1) {
		for (std::size_t i = 0; i < dataset.size(); ++i)
			run_one(i);
	} else {
		std::atomic<std::size_t> next{0};
		std::vector<std::thread> pool;
		for (unsigned w = 0; w < workers; ++w)
			pool.emplace_back([&] {
				for (std::size_t i = next++; i < dataset.size(); i = next++)
					run_one(i);
			});
		for (auto &t : pool)
			t.join();
	}
	aggregate(report);
	return report;
}

inline nlohmann::ordered_json report_to_json(std::span<const MetricReport> reports, const MetricConfig &config) {
	nlohmann::ordered_json doc;
	doc["soft_threshold"] = config.soft_threshold;
	doc["metric_store"] = config.metric_store ? config.metric_store->name() : std::string();
	doc["reports"] = nlohmann::ordered_json::array();
	for (const auto &r : reports) {
		nlohmann::ordered_json j;
		j["mode"] = r.mode;
		j["n"] = r.n;
		j["hard_accuracy"] = r.hard_accuracy;
		j["soft_accuracy"] = r.soft_accuracy;
		j["avg_w2v_similarity"] = r.avg_w2v_similarity;
		j["failures"] = r.failures;
		j["oov_predictions"] = r.oov_predictions;
		j["per_sample"] = nlohmann::ordered_json::array();
		for (const auto &s : r.per_sample) {
			nlohmann::ordered_json row;
			row["id"] = s.id;
			row["prediction"] = s.prediction;
			row["hard"] = s.hard;
			row["soft"] = s.soft;
			row["similarity"] = s.similarity;
			row["failed"] = s.failed;
			if (s.failed)
				row["error"] = s.error;
			j["per_sample"].push_back(std::move(row));
		}
		doc["reports"].push_back(std::move(j));
	}
	return doc;
}

/// Plain-text comparison table, one row per mode.
inline std::string format_report_table(std::span<const MetricReport> reports) {
	std::string out;
	char buf[256];
	std::snprintf(buf, sizeof(buf), "%-20s %14s %14s %20s %6s\n", "method", "hard accuracy", "soft accuracy",
	              "avg. w2v similarity", "n");
	out += buf;
	for (const auto &r : reports) {
		std::snprintf(buf, sizeof(buf), "%-20s %13.2f%% %13.2f%% %20.4f %6zu\n", r.mode.c_str(),
		              100.0 * r.hard_accuracy, 100.0 * r.soft_accuracy, r.avg_w2v_similarity, r.n);
		out += buf;
	}
	return out;
}

} // namespace vtrank
