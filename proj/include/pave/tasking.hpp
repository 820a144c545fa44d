// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "pave/llm_client.hpp"

namespace pave {

enum class Priority { Urgent, Normal };

std::string priority_name(Priority p);
Priority priority_from_name(const std::string& name);

struct ClassifiedTask {
    std::string task;
    Priority priority = Priority::Normal;
    std::map<std::string, std::string> osm_tags;
};

struct TagSet {
    std::map<std::string, std::string> tags;
};

enum class PromptKind { Classify, Aggregate, Evaluate };

/// Directory holding the prompt template assets. Defaults to the
/// in-repo data/prompts directory; PAVE_PROMPT_DIR overrides it.
std::string prompt_dir();

/// Renders a template into chat messages. The context object supplies
/// every {{slot}}; strings substitute verbatim, other values as JSON.
std::vector<ChatMessage> render_prompt(PromptKind kind, const nlohmann::json& context);

/// One ClassifiedTask per sub-task, in input order, parsed from the
/// model reply. Re-prompts up to max_retries times on schema failures.
std::vector<ClassifiedTask> classify_tasks(Backend& client, const std::vector<std::string>& tasks,
                                           int max_retries = 3);

/// Merged OSM tag mapping covering all tasks' POI types.
TagSet aggregate_tags(Backend& client, const std::vector<std::string>& tasks,
                      int max_retries = 3);

/// First well-formed JSON value embedded in free text (models often
/// wrap structured output in prose). Throws ParseError if none parses.
nlohmann::json extract_first_json(const std::string& text);

nlohmann::json classified_task_to_json(const ClassifiedTask& task);
ClassifiedTask classified_task_from_json(const nlohmann::json& j);

/// Later entries win key conflicts; conflicts are logged to clog.
std::map<std::string, std::string> merge_tags(
    const std::vector<std::map<std::string, std::string>>& tag_maps);

// Deterministic offline classifier used by the STUB backend and the
// benchmark oracle. Splits multi-clause sentences on before/then/and
// then/on the way to, tags each clause from a fixed keyword table, and
// marks a clause URGENT when it contains an urgency phrase. Clauses
// with no keyword hit are dropped.
namespace stub_rules {

std::vector<std::string> split_clauses(const std::string& task);
bool is_urgent(const std::string& clause);
std::map<std::string, std::string> clause_tags(const std::string& clause);
std::vector<ClassifiedTask> classify(const std::vector<std::string>& tasks);

}  // namespace stub_rules

}  // namespace pave
