#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace hyperqa::corpus {

// A titled passage; the atomic retrievable unit.
struct Document {
    std::string doc_id;
    std::string title;
    std::string passage;
    bool degenerate = false;  // set when the passage is empty

    bool operator==(const Document&) const = default;
};

struct QuestionMeta {
    std::optional<int> hop_count;
    std::string reasoning_type;  // "bridge" / "comparison" when the dataset says

    bool operator==(const QuestionMeta&) const = default;
};

struct QuestionInstance {
    std::string question_id;
    std::string question;
    std::string gold_answer;
    std::vector<Document> supports;
    QuestionMeta meta;

    bool operator==(const QuestionInstance&) const = default;
};

struct LoadOptions {
    // HotpotQA instances carry 10 supports and MuSiQue instances 20; loading
    // anything else is an error unless this is set.
    bool tolerate_count_deviation = false;
    // Non-fatal loader diagnostics (duplicate titles, empty passages).
    std::function<void(const std::string&)> warn;
};

// HotpotQA dev JSON: array of {_id, question, answer, context=[[title,[sentence,...]],...]}.
// Sentences are joined with a single space to form the passage.
std::vector<QuestionInstance> load_hotpotqa(const std::filesystem::path& path,
                                            const LoadOptions& options = {});

// MuSiQue dev JSONL: {id, question, answer, paragraphs=[{title, paragraph_text,...},...]}
// per line. Ids of the form "2hop__..." carry the hop count.
std::vector<QuestionInstance> load_musique(const std::filesystem::path& path,
                                           const LoadOptions& options = {});

// Canonical internal JSON form (single instance), used by bundled fixtures.
QuestionInstance load_fixture_corpus(const std::filesystem::path& path);

nlohmann::json to_json(const QuestionInstance& instance);
QuestionInstance instance_from_json(const nlohmann::json& j);

}  // namespace hyperqa::corpus
