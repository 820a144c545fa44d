// SPDX-License-Identifier: Apache-2.0
#include "pave/tasking.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "pave/errors.hpp"

#ifndef PAVE_DEFAULT_PROMPT_DIR
#define PAVE_DEFAULT_PROMPT_DIR "data/prompts"
#endif

namespace pave {

std::string priority_name(Priority p) {
    return p == Priority::Urgent ? "URGENT" : "NORMAL";
}

Priority priority_from_name(const std::string& name) {
    if (name == "URGENT") return Priority::Urgent;
    if (name == "NORMAL") return Priority::Normal;
    throw ParseError("invalid priority: " + name);
}

std::string prompt_dir() {
    if (const char* v = std::getenv("PAVE_PROMPT_DIR")) return v;
    return PAVE_DEFAULT_PROMPT_DIR;
}

namespace {

struct Template {
    std::string system_text;
    std::string user_text;
};

const char* template_file(PromptKind kind) {
    switch (kind) {
        case PromptKind::Classify: return "classify.txt";
        case PromptKind::Aggregate: return "aggregate.txt";
        case PromptKind::Evaluate: return "evaluate.txt";
    }
    return "classify.txt";
}

Template load_template(PromptKind kind) {
    const std::string path = prompt_dir() + "/" + template_file(kind);
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open prompt template: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    const auto sys_pos = text.find("<<SYSTEM>>");
    const auto usr_pos = text.find("<<USER>>");
    if (sys_pos == std::string::npos || usr_pos == std::string::npos || usr_pos < sys_pos) {
        throw ParseError("prompt template " + path + " must contain <<SYSTEM>> then <<USER>>");
    }
    const auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r\n");
        const auto b = s.find_last_not_of(" \t\r\n");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    Template t;
    t.system_text = trim(text.substr(sys_pos + 10, usr_pos - sys_pos - 10));
    t.user_text = trim(text.substr(usr_pos + 8));
    return t;
}

std::string substitute(const std::string& text, const nlohmann::json& context) {
    std::string out;
    std::size_t pos = 0;
    while (true) {
        const auto open = text.find("{{", pos);
        if (open == std::string::npos) {
            out += text.substr(pos);
            return out;
        }
        const auto close = text.find("}}", open);
        if (close == std::string::npos) {
            out += text.substr(pos);
            return out;
        }
        out += text.substr(pos, open - pos);
        const std::string slot = text.substr(open + 2, close - open - 2);
        if (!context.contains(slot)) {
            throw MissingSlotError("prompt slot '" + slot + "' missing from context");
        }
        const auto& value = context.at(slot);
        out += value.is_string() ? value.get<std::string>() : value.dump();
        pos = close + 2;
    }
}

}  // namespace

std::vector<ChatMessage> render_prompt(PromptKind kind, const nlohmann::json& context) {
    const Template t = load_template(kind);
    std::string system_text = substitute(t.system_text, context);
    std::string user_text = substitute(t.user_text, context);
    std::vector<ChatMessage> out;
    out.push_back(ChatMessage{Role::System, std::move(system_text)});
    out.push_back(ChatMessage{Role::User, std::move(user_text)});
    return out;
}

nlohmann::json extract_first_json(const std::string& text) {
    for (std::size_t start = 0; start < text.size(); ++start) {
        const char c = text[start];
        if (c != '{' && c != '[') continue;
        int depth = 0;
        bool in_string = false;
        bool escaped = false;
        for (std::size_t i = start; i < text.size(); ++i) {
            const char ch = text[i];
            if (in_string) {
                if (escaped) {
                    escaped = false;
                } else if (ch == '\\') {
                    escaped = true;
                } else if (ch == '"') {
                    in_string = false;
                }
                continue;
            }
            if (ch == '"') {
                in_string = true;
            } else if (ch == '{' || ch == '[') {
                ++depth;
            } else if (ch == '}' || ch == ']') {
                --depth;
                if (depth == 0) {
                    const auto candidate = text.substr(start, i - start + 1);
                    const auto parsed =
                        nlohmann::json::parse(candidate, nullptr, /*allow_exceptions=*/false);
                    if (!parsed.is_discarded()) return parsed;
                    break;
                }
            }
        }
    }
    throw ParseError("no JSON value found in reply");
}

namespace {

std::vector<ClassifiedTask> parse_classification(const nlohmann::json& parsed) {
    if (!parsed.is_array()) throw ParseError("classification reply must be a JSON list");
    std::vector<ClassifiedTask> out;
    for (const auto& item : parsed) {
        out.push_back(classified_task_from_json(item));
    }
    return out;
}

}  // namespace

nlohmann::json classified_task_to_json(const ClassifiedTask& task) {
    return {{"task", task.task},
            {"priority", priority_name(task.priority)},
            {"osm_tags", task.osm_tags}};
}

ClassifiedTask classified_task_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("task") || !j.at("task").is_string() ||
        !j.contains("priority") || !j.at("priority").is_string() || !j.contains("osm_tags") ||
        !j.at("osm_tags").is_object()) {
        throw ParseError("classified task must have string 'task', string 'priority' and "
                         "object 'osm_tags'");
    }
    ClassifiedTask t;
    t.task = j.at("task").get<std::string>();
    t.priority = priority_from_name(j.at("priority").get<std::string>());
    for (const auto& [k, v] : j.at("osm_tags").items()) {
        if (!v.is_string()) throw ParseError("osm_tags values must be strings");
        t.osm_tags[k] = v.get<std::string>();
    }
    if (t.osm_tags.empty()) throw ParseError("osm_tags must be nonempty");
    return t;
}

std::vector<ClassifiedTask> classify_tasks(Backend& client, const std::vector<std::string>& tasks,
                                           int max_retries) {
    if (tasks.empty()) throw PreconditionError("classify_tasks: tasks must be nonempty");
    const auto messages =
        render_prompt(PromptKind::Classify, {{"tasks_json", nlohmann::json(tasks).dump()}});

    std::string last_reply;
    std::string last_error;
    for (int attempt = 0; attempt <= max_retries; ++attempt) {
        last_reply = client.complete(messages);
        try {
            return parse_classification(extract_first_json(last_reply));
        } catch (const ParseError& e) {
            last_error = e.what();
        }
    }
    throw SchemaError("classification reply failed validation after " +
                          std::to_string(max_retries) + " retries: " + last_error,
                      last_reply);
}

std::map<std::string, std::string> merge_tags(
    const std::vector<std::map<std::string, std::string>>& tag_maps) {
    std::map<std::string, std::string> merged;
    for (const auto& tags : tag_maps) {
        for (const auto& [k, v] : tags) {
            const auto it = merged.find(k);
            if (it != merged.end() && it->second != v) {
                std::clog << "pave: tag conflict on '" << k << "': '" << it->second
                          << "' replaced by '" << v << "'\n";
            }
            merged[k] = v;
        }
    }
    return merged;
}

TagSet aggregate_tags(Backend& client, const std::vector<std::string>& tasks, int max_retries) {
    if (tasks.empty()) throw PreconditionError("aggregate_tags: tasks must be nonempty");
    const auto messages =
        render_prompt(PromptKind::Aggregate, {{"tasks_json", nlohmann::json(tasks).dump()}});

    std::string last_reply;
    std::string last_error;
    for (int attempt = 0; attempt <= max_retries; ++attempt) {
        last_reply = client.complete(messages);
        try {
            const auto parsed = extract_first_json(last_reply);
            if (!parsed.is_object() || !parsed.contains("osm_tags") ||
                !parsed.at("osm_tags").is_object()) {
                throw ParseError("aggregation reply must be {\"osm_tags\": {...}}");
            }
            TagSet set;
            for (const auto& [k, v] : parsed.at("osm_tags").items()) {
                if (!v.is_string()) throw ParseError("osm_tags values must be strings");
                set.tags[k] = v.get<std::string>();
            }
            return set;
        } catch (const ParseError& e) {
            last_error = e.what();
        }
    }
    throw SchemaError("aggregation reply failed validation after " + std::to_string(max_retries) +
                          " retries: " + last_error,
                      last_reply);
}

namespace stub_rules {

namespace {

std::string lower(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
}

bool word_boundary(const std::string& text, std::size_t pos, std::size_t len) {
    const auto alpha = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; };
    if (pos > 0 && alpha(text[pos - 1])) return false;
    if (pos + len < text.size() && alpha(text[pos + len])) return false;
    return true;
}

std::string trim_clause(const std::string& s) {
    const char* junk = " \t\r\n,.;:";
    const auto a = s.find_first_not_of(junk);
    const auto b = s.find_last_not_of(junk);
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

}  // namespace

std::vector<std::string> split_clauses(const std::string& task) {
    static const std::vector<std::string> markers = {"on the way to", "and then", "before",
                                                     "then"};
    const std::string low = lower(task);
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos < task.size()) {
        std::size_t best_at = std::string::npos;
        std::size_t best_len = 0;
        for (const auto& m : markers) {
            std::size_t at = low.find(m, pos);
            while (at != std::string::npos && !word_boundary(low, at, m.size())) {
                at = low.find(m, at + 1);
            }
            if (at != std::string::npos && (at < best_at || (at == best_at && m.size() > best_len))) {
                best_at = at;
                best_len = m.size();
            }
        }
        if (best_at == std::string::npos) {
            const std::string tail = trim_clause(task.substr(pos));
            if (!tail.empty()) out.push_back(tail);
            break;
        }
        const std::string clause = trim_clause(task.substr(pos, best_at - pos));
        if (!clause.empty()) out.push_back(clause);
        pos = best_at + best_len;
    }
    return out;
}

bool is_urgent(const std::string& clause) {
    static const std::vector<std::string> phrases = {"running out", "need", "urgent", "emergency",
                                                     "almost empty"};
    const std::string low = lower(clause);
    return std::any_of(phrases.begin(), phrases.end(),
                       [&low](const std::string& p) { return low.find(p) != std::string::npos; });
}

std::map<std::string, std::string> clause_tags(const std::string& clause) {
    static const std::vector<std::pair<std::vector<std::string>, std::pair<std::string, std::string>>>
        table = {
            {{"gas", "fuel", "empty tank"}, {"amenity", "fuel"}},
            {{"supermarket", "grocery"}, {"shop", "supermarket"}},
            {{"park"}, {"leisure", "park"}},
            {{"hospital"}, {"amenity", "hospital"}},
            {{"pharmacy"}, {"amenity", "pharmacy"}},
        };
    const std::string low = lower(clause);
    for (const auto& [keywords, tag] : table) {
        for (const auto& kw : keywords) {
            if (low.find(kw) != std::string::npos) return {{tag.first, tag.second}};
        }
    }
    return {};
}

std::vector<ClassifiedTask> classify(const std::vector<std::string>& tasks) {
    std::vector<ClassifiedTask> out;
    for (const auto& task : tasks) {
        for (const auto& clause : split_clauses(task)) {
            auto tags = clause_tags(clause);
            if (tags.empty()) continue;
            ClassifiedTask t;
            t.task = clause;
            t.priority = is_urgent(clause) ? Priority::Urgent : Priority::Normal;
            t.osm_tags = std::move(tags);
            out.push_back(std::move(t));
        }
    }
    return out;
}

}  // namespace stub_rules

}  // namespace pave
