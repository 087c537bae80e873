#include "interq/fragment_id.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "interq/error.hpp"

namespace interq {

namespace {

bool is_job_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '.';
}

std::optional<int> parse_positive(std::string_view digits) {
    if (digits.empty() || digits.front() == '0') return std::nullopt;
    int value = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc{} || ptr != digits.data() + digits.size()) return std::nullopt;
    return value;
}

[[noreturn]] void bad_id(std::string_view id) {
    throw Error(ErrorCode::InvalidFragmentId, "cannot parse fragment id '" + std::string(id) + "'");
}

} // namespace

bool is_valid_job_id(std::string_view id) {
    return !id.empty() && std::all_of(id.begin(), id.end(), is_job_char);
}

std::string lo_fragment_id(std::string_view job, int n) {
    return std::string(job) + "-LO-" + std::to_string(n);
}

std::string upstream_fragment_id(std::string_view job, int n) {
    return std::string(job) + "-U-" + std::to_string(n);
}

std::string downstream_fragment_id(std::string_view job, int n) {
    return std::string(job) + "-D-" + std::to_string(n);
}

std::string remote_fragment_id(std::string_view job, int part_index) {
    if (part_index == 0) return std::string(job) + "_P";
    return std::string(job) + "_X" + std::to_string(part_index);
}

ParsedFragmentId parse_fragment_id(std::string_view id) {
    if (is_valid_job_id(id)) return {std::nullopt, Stage::FLAT, 0};

    if (auto us = id.find('_'); us != std::string_view::npos) {
        auto job = id.substr(0, us);
        auto rest = id.substr(us + 1);
        if (!is_valid_job_id(job)) bad_id(id);
        if (rest == "P") return {std::string(job), Stage::REMOTE, 0};
        if (rest.size() > 1 && rest.front() == 'X') {
            if (auto n = parse_positive(rest.substr(1))) return {std::string(job), Stage::REMOTE, *n};
        }
        bad_id(id);
    }

    auto dash = id.find('-');
    if (dash == std::string_view::npos) bad_id(id);
    auto job = id.substr(0, dash);
    auto rest = id.substr(dash + 1);
    auto dash2 = rest.find('-');
    if (!is_valid_job_id(job) || dash2 == std::string_view::npos) bad_id(id);
    auto tag = rest.substr(0, dash2);
    auto n = parse_positive(rest.substr(dash2 + 1));
    if (!n) bad_id(id);
    if (tag == "LO") return {std::string(job), Stage::FLAT, *n};
    if (tag == "U") return {std::string(job), Stage::UPSTREAM, *n};
    if (tag == "D") return {std::string(job), Stage::DOWNSTREAM, *n};
    bad_id(id);
}

} // namespace interq
