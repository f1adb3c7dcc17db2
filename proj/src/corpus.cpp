#include "hyperqa/corpus.hpp"

#include <cctype>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "hyperqa/errors.hpp"
#include "hyperqa/text.hpp"

namespace hyperqa::corpus {

namespace {

void warn_default(const std::string& message) { std::cerr << "[corpus] " << message << "\n"; }

void emit_warning(const LoadOptions& options, const std::string& message) {
    if (options.warn)
        options.warn(message);
    else
        warn_default(message);
}

[[noreturn]] void record_error(std::size_t index, const std::string& what) {
    throw LoadError("record " + std::to_string(index) + ": " + what);
}

std::string require_string(const nlohmann::json& record, const char* field, std::size_t index) {
    auto it = record.find(field);
    if (it == record.end() || !it->is_string())
        record_error(index, std::string("missing or non-string field '") + field + "'");
    return it->get<std::string>();
}

// Titles must be unique within one instance; repeats get " (2)", " (3)", ...
std::string disambiguate_title(std::map<std::string, int>& seen, const std::string& title,
                               const std::string& question_id, const LoadOptions& options) {
    int& count = seen[title];
    ++count;
    if (count == 1) return title;
    std::string fixed = title + " (" + std::to_string(count) + ")";
    emit_warning(options, "duplicate title '" + title + "' in instance " + question_id +
                              ", renamed to '" + fixed + "'");
    return fixed;
}

void finalize_document(Document& doc, const std::string& question_id, const LoadOptions& options) {
    if (doc.title.empty()) throw LoadError("instance " + question_id + ": empty document title");
    if (doc.passage.empty()) {
        doc.degenerate = true;
        emit_warning(options, "instance " + question_id + ": document '" + doc.title +
                                  "' has an empty passage");
    }
}

void check_support_count(const QuestionInstance& instance, std::size_t expected,
                         const LoadOptions& options) {
    if (instance.supports.empty())
        throw LoadError("instance " + instance.question_id + ": supports are empty");
    if (!options.tolerate_count_deviation && instance.supports.size() != expected)
        throw LoadError("instance " + instance.question_id + ": expected " +
                        std::to_string(expected) + " supporting documents, found " +
                        std::to_string(instance.supports.size()) +
                        " (pass tolerate_count_deviation to accept)");
}

nlohmann::json parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw LoadError("cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw LoadError("cannot parse " + path.string() + ": " + e.what());
    }
    return j;
}

}  // namespace

std::vector<QuestionInstance> load_hotpotqa(const std::filesystem::path& path,
                                            const LoadOptions& options) {
    nlohmann::json root = parse_file(path);
    if (!root.is_array()) throw LoadError(path.string() + ": expected a top-level array");

    std::vector<QuestionInstance> instances;
    instances.reserve(root.size());
    for (std::size_t i = 0; i < root.size(); ++i) {
        const nlohmann::json& record = root[i];
        if (!record.is_object()) record_error(i, "not an object");

        QuestionInstance instance;
        instance.question_id = require_string(record, "_id", i);
        instance.question = require_string(record, "question", i);
        instance.gold_answer = require_string(record, "answer", i);
        if (record.contains("type") && record["type"].is_string())
            instance.meta.reasoning_type = record["type"].get<std::string>();

        auto ctx = record.find("context");
        if (ctx == record.end() || !ctx->is_array())
            record_error(i, "missing or non-array field 'context'");

        std::map<std::string, int> titles_seen;
        for (std::size_t d = 0; d < ctx->size(); ++d) {
            const nlohmann::json& pair = (*ctx)[d];
            if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() ||
                !pair[1].is_array())
                record_error(i, "context entry " + std::to_string(d) +
                                    " is not a [title, sentence-list] pair");

            Document doc;
            doc.doc_id = instance.question_id + ":" + std::to_string(d);
            doc.title = disambiguate_title(titles_seen, pair[0].get<std::string>(),
                                           instance.question_id, options);

            std::string passage;
            for (const nlohmann::json& sentence : pair[1]) {
                if (!sentence.is_string())
                    record_error(i, "context entry " + std::to_string(d) +
                                        " has a non-string sentence");
                if (!passage.empty()) passage.push_back(' ');
                passage += sentence.get<std::string>();
            }
            doc.passage = std::move(passage);
            finalize_document(doc, instance.question_id, options);
            instance.supports.push_back(std::move(doc));
        }
        check_support_count(instance, 10, options);
        instances.push_back(std::move(instance));
    }
    return instances;
}

std::vector<QuestionInstance> load_musique(const std::filesystem::path& path,
                                           const LoadOptions& options) {
    std::ifstream in(path);
    if (!in) throw LoadError("cannot open " + path.string());

    std::vector<QuestionInstance> instances;
    std::string line;
    std::size_t index = 0;
    while (std::getline(in, line)) {
        if (text::trim(line).empty()) continue;
        nlohmann::json record;
        try {
            record = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            record_error(index, std::string("invalid JSON line: ") + e.what());
        }

        QuestionInstance instance;
        instance.question_id = require_string(record, "id", index);
        instance.question = require_string(record, "question", index);
        instance.gold_answer = require_string(record, "answer", index);

        // MuSiQue ids encode the hop count, e.g. "2hop__482757_12019".
        const std::string& id = instance.question_id;
        std::size_t pos = id.find("hop");
        if (pos != std::string::npos && pos > 0) {
            std::size_t digits = pos;
            while (digits > 0 && std::isdigit(static_cast<unsigned char>(id[digits - 1])))
                --digits;
            if (digits < pos) instance.meta.hop_count = std::stoi(id.substr(digits, pos - digits));
        }

        auto paragraphs = record.find("paragraphs");
        if (paragraphs == record.end() || !paragraphs->is_array())
            record_error(index, "missing or non-array field 'paragraphs'");

        std::map<std::string, int> titles_seen;
        for (std::size_t d = 0; d < paragraphs->size(); ++d) {
            const nlohmann::json& para = (*paragraphs)[d];
            if (!para.is_object())
                record_error(index, "paragraph " + std::to_string(d) + " is not an object");
            Document doc;
            doc.doc_id = instance.question_id + ":" + std::to_string(d);
            if (!para.contains("title") || !para["title"].is_string())
                record_error(index, "paragraph " + std::to_string(d) + " missing 'title'");
            if (!para.contains("paragraph_text") || !para["paragraph_text"].is_string())
                record_error(index, "paragraph " + std::to_string(d) + " missing 'paragraph_text'");
            doc.title = disambiguate_title(titles_seen, para["title"].get<std::string>(),
                                           instance.question_id, options);
            doc.passage = para["paragraph_text"].get<std::string>();
            finalize_document(doc, instance.question_id, options);
            instance.supports.push_back(std::move(doc));
        }
        check_support_count(instance, 20, options);
        instances.push_back(std::move(instance));
        ++index;
    }
    return instances;
}

QuestionInstance load_fixture_corpus(const std::filesystem::path& path) {
    nlohmann::json j = parse_file(path);
    QuestionInstance instance = instance_from_json(j);
    if (instance.supports.empty())
        throw LoadError("fixture " + path.string() + ": supports are empty");
    return instance;
}

nlohmann::json to_json(const QuestionInstance& instance) {
    nlohmann::json supports = nlohmann::json::array();
    for (const Document& doc : instance.supports) {
        nlohmann::json d{{"doc_id", doc.doc_id}, {"title", doc.title}, {"passage", doc.passage}};
        if (doc.degenerate) d["degenerate"] = true;
        supports.push_back(std::move(d));
    }
    nlohmann::json j{{"question_id", instance.question_id},
                     {"question", instance.question},
                     {"gold_answer", instance.gold_answer},
                     {"supports", std::move(supports)}};
    if (instance.meta.hop_count) j["meta"]["hop_count"] = *instance.meta.hop_count;
    if (!instance.meta.reasoning_type.empty())
        j["meta"]["reasoning_type"] = instance.meta.reasoning_type;
    return j;
}

QuestionInstance instance_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw LoadError("instance JSON: expected an object");
    QuestionInstance instance;
    try {
        instance.question_id = j.at("question_id").get<std::string>();
        instance.question = j.at("question").get<std::string>();
        instance.gold_answer = j.at("gold_answer").get<std::string>();
        for (const nlohmann::json& d : j.at("supports")) {
            Document doc;
            doc.doc_id = d.at("doc_id").get<std::string>();
            doc.title = d.at("title").get<std::string>();
            doc.passage = d.at("passage").get<std::string>();
            doc.degenerate = d.value("degenerate", false);
            if (doc.title.empty()) throw LoadError("instance JSON: empty document title");
            instance.supports.push_back(std::move(doc));
        }
        if (j.contains("meta")) {
            const nlohmann::json& meta = j["meta"];
            if (meta.contains("hop_count")) instance.meta.hop_count = meta["hop_count"].get<int>();
            if (meta.contains("reasoning_type"))
                instance.meta.reasoning_type = meta["reasoning_type"].get<std::string>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw LoadError(std::string("instance JSON: ") + e.what());
    }
    return instance;
}

}  // namespace hyperqa::corpus
