#include "navexplain/decision.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>

namespace navexplain {

namespace {

struct AdvisorName {
  AdvisorId id;
  std::string_view name;
};

constexpr std::array<AdvisorName, 14> kAdvisorNames{{
    {AdvisorId::Victory, "Victory"},
    {AdvisorId::AvoidWalls, "AvoidWalls"},
    {AdvisorId::NotOpposite, "NotOpposite"},
    {AdvisorId::BigStep, "BigStep"},
    {AdvisorId::ElbowRoom, "ElbowRoom"},
    {AdvisorId::Explorer, "Explorer"},
    {AdvisorId::GoAround, "GoAround"},
    {AdvisorId::Greedy, "Greedy"},
    {AdvisorId::Access, "Access"},
    {AdvisorId::Convey, "Convey"},
    {AdvisorId::Enter, "Enter"},
    {AdvisorId::Exit, "Exit"},
    {AdvisorId::Trailer, "Trailer"},
    {AdvisorId::Unlikely, "Unlikely"},
}};

}  // namespace

std::string_view to_string(AdvisorId id) {
  for (const auto& entry : kAdvisorNames) {
    if (entry.id == id) return entry.name;
  }
  return "?";
}

AdvisorId parse_advisor(std::string_view name) {
  for (const auto& entry : kAdvisorNames) {
    if (entry.name == name) return entry.id;
  }
  throw std::invalid_argument("unknown advisor '" + std::string(name) + "'");
}

int advisor_tier(AdvisorId id) {
  switch (id) {
    case AdvisorId::Victory:
    case AdvisorId::AvoidWalls:
    case AdvisorId::NotOpposite:
      return 1;
    default:
      return 3;
  }
}

CommentMatrix::CommentMatrix(std::vector<AdvisorId> advisors, std::vector<Action> actions)
    : advisors_(std::move(advisors)),
      actions_(std::move(actions)),
      strengths_(advisors_.size() * actions_.size(), 0.0) {}

CommentMatrix::CommentMatrix(std::vector<AdvisorId> advisors, std::vector<Action> actions,
                             std::vector<std::vector<double>> rows)
    : CommentMatrix(std::move(advisors), std::move(actions)) {
  if (rows.size() != advisors_.size()) {
    throw std::invalid_argument("comment matrix: row count does not match advisor count");
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != actions_.size()) {
      throw std::invalid_argument("comment matrix: row length does not match action count");
    }
    for (std::size_t j = 0; j < rows[i].size(); ++j) set(i, j, rows[i][j]);
  }
}

void CommentMatrix::set(std::size_t advisor, std::size_t action, double strength) {
  if (!(strength >= 0.0 && strength <= 10.0)) {
    throw std::out_of_range("comment strength must lie in [0, 10]");
  }
  strengths_.at(advisor * actions_.size() + action) = strength;
}

std::vector<double> CommentMatrix::column_sums() const {
  std::vector<double> sums(actions_.size(), 0.0);
  for (std::size_t i = 0; i < advisors_.size(); ++i) {
    for (std::size_t j = 0; j < actions_.size(); ++j) sums[j] += at(i, j);
  }
  return sums;
}

std::optional<std::size_t> CommentMatrix::action_index(const Action& a) const {
  auto it = std::find(actions_.begin(), actions_.end(), a);
  if (it == actions_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - actions_.begin());
}

std::optional<std::size_t> CommentMatrix::advisor_index(AdvisorId id) const {
  auto it = std::find(advisors_.begin(), advisors_.end(), id);
  if (it == advisors_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - advisors_.begin());
}

bool Tier1Outcome::is_vetoed(const Action& a) const {
  return std::find(vetoes.begin(), vetoes.end(), a) != vetoes.end();
}

std::optional<AdvisorId> Tier1Outcome::vetoed_by(const Action& a) const {
  for (std::size_t i = 0; i < vetoes.size(); ++i) {
    if (vetoes[i] == a) return i < veto_sources.size() ? veto_sources[i] : AdvisorId::AvoidWalls;
  }
  return std::nullopt;
}

std::string_view to_string(DecidedBy d) {
  switch (d) {
    case DecidedBy::Tier1Mandate:
      return "tier1_mandate";
    case DecidedBy::Tier1LastLeft:
      return "tier1_lastleft";
    case DecidedBy::Tier3:
      return "tier3";
  }
  return "?";
}

DecidedBy parse_decided_by(std::string_view s) {
  if (s == "tier1_mandate") return DecidedBy::Tier1Mandate;
  if (s == "tier1_lastleft") return DecidedBy::Tier1LastLeft;
  if (s == "tier3") return DecidedBy::Tier3;
  throw std::invalid_argument("unknown decided_by '" + std::string(s) + "'");
}

}  // namespace navexplain
