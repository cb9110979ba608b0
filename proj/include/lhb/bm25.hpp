#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lhb/textscan.hpp"

namespace lhb {

// Okapi BM25 over an in-memory inverted index. k1/b defaults follow common
// practice; tokenization is case-folded alphanumeric runs.
class Bm25Index {
  public:
    explicit Bm25Index(double k1 = 1.2, double b = 0.75) : k1_(k1), b_(b) {}

    void add_document(int doc_id, const std::string& text) {
        std::vector<std::string> terms = tokenize_terms(text);
        std::map<std::string, int> tf;
        for (const auto& t : terms) ++tf[t];
        for (const auto& [term, freq] : tf) {
            postings_[term].push_back({doc_id, freq});
        }
        doc_lengths_[doc_id] = static_cast<int>(terms.size());
        total_length_ += static_cast<std::int64_t>(terms.size());
    }

    std::size_t size() const { return doc_lengths_.size(); }

    double avg_doc_length() const {
        return doc_lengths_.empty()
                   ? 0.0
                   : static_cast<double>(total_length_) / static_cast<double>(doc_lengths_.size());
    }

    // IDF(t) = ln(1 + (N - df + 0.5) / (df + 0.5)); always positive and finite.
    double idf(const std::string& term) const {
        auto it = postings_.find(term);
        double df = it == postings_.end() ? 0.0 : static_cast<double>(it->second.size());
        double n = static_cast<double>(doc_lengths_.size());
        return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
    }

    double score(const std::vector<std::string>& query_terms, int doc_id) const {
        auto len_it = doc_lengths_.find(doc_id);
        if (len_it == doc_lengths_.end()) return 0.0;
        double len = static_cast<double>(len_it->second);
        double avg = avg_doc_length();
        double total = 0.0;
        for (const auto& term : query_terms) {
            auto it = postings_.find(term);
            if (it == postings_.end()) continue;
            double tf = 0.0;
            for (const auto& [d, f] : it->second) {
                if (d == doc_id) {
                    tf = static_cast<double>(f);
                    break;
                }
            }
            if (tf == 0.0) continue;
            double norm = tf * (k1_ + 1.0) / (tf + k1_ * (1.0 - b_ + b_ * len / avg));
            total += idf(term) * norm;
        }
        return total;
    }

    // Ranked doc ids, ties broken by lower doc id.
    std::vector<int> top_k(const std::vector<std::string>& query_terms, std::size_t k) const {
        std::vector<std::pair<double, int>> scored;
        scored.reserve(doc_lengths_.size());
        for (const auto& [doc_id, len] : doc_lengths_) {
            scored.push_back({score(query_terms, doc_id), doc_id});
        }
        std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
        std::vector<int> out;
        for (std::size_t i = 0; i < scored.size() && i < k; ++i) out.push_back(scored[i].second);
        return out;
    }

    double k1() const { return k1_; }
    double b() const { return b_; }

  private:
    double k1_;
    double b_;
    std::map<std::string, std::vector<std::pair<int, int>>> postings_;  // term -> (doc, tf)
    std::map<int, int> doc_lengths_;
    std::int64_t total_length_ = 0;
};

inline double bm25_score(const std::vector<std::string>& query_terms, int doc_id,
                         const Bm25Index& index) {
    return index.score(query_terms, doc_id);
}

}  // namespace lhb
