#include "coderev/sentiment.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace coderev {

std::string_view sentiment_label_name(SentimentLabel label) {
  switch (label) {
    case SentimentLabel::Positive: return "Positive";
    case SentimentLabel::Negative: return "Negative";
    case SentimentLabel::Neutral: return "Neutral";
  }
  return "?";
}

namespace {

struct Entry {
  const char* token;
  double valence;
};

// Defect-discussion vocabulary. Valences follow the usual [-4, 4] scale.
constexpr Entry kDefaultValences[] = {
    // failures and defects
    {"error", -2.2}, {"errors", -2.2}, {"bug", -2.4}, {"bugs", -2.4},
    {"buggy", -2.6}, {"defect", -2.4}, {"defective", -2.6}, {"crash", -3.1},
    {"crashes", -3.1}, {"crashed", -3.1}, {"crashing", -3.1}, {"fail", -2.5},
    {"fails", -2.5}, {"failed", -2.5}, {"failing", -2.5}, {"failure", -2.7},
    {"broken", -2.6}, {"break", -2.0}, {"breaks", -2.0}, {"breaking", -2.0},
    {"exception", -1.8}, {"exceptions", -1.8}, {"segfault", -3.2},
    {"overflow", -2.1}, {"underflow", -2.1}, {"leak", -2.3}, {"leaks", -2.3},
    {"leaking", -2.3}, {"deadlock", -2.8}, {"hang", -2.4}, {"hangs", -2.4},
    {"hanging", -2.4}, {"freeze", -2.4}, {"freezes", -2.4}, {"frozen", -2.4},
    {"corrupt", -2.9}, {"corrupted", -2.9}, {"corruption", -2.9},
    {"invalid", -1.9}, {"undefined", -1.6}, {"unexpected", -1.5},
    {"wrong", -2.1}, {"wrongly", -2.1}, {"incorrect", -2.1},
    {"incorrectly", -2.1}, {"mistake", -1.9}, {"mistakes", -1.9},
    {"fault", -2.2}, {"faulty", -2.4}, {"flaw", -2.2}, {"flawed", -2.3},
    {"glitch", -2.0}, {"glitches", -2.0}, {"regression", -2.0},
    {"vulnerable", -2.5}, {"vulnerability", -2.5}, {"unsafe", -2.2},
    {"insecure", -2.2}, {"dangerous", -2.4}, {"critical", -1.8},
    {"severe", -2.2}, {"fatal", -2.9}, {"panic", -2.7}, {"abort", -2.3},
    {"aborts", -2.3}, {"aborted", -2.3}, {"terminate", -1.4},
    {"terminated", -1.4}, {"died", -2.5}, {"dies", -2.5}, {"dead", -2.3},
    // trouble and confusion
    {"problem", -1.7}, {"problems", -1.7}, {"problematic", -2.0},
    {"issue", -1.4}, {"issues", -1.4}, {"trouble", -1.8}, {"troubles", -1.8},
    {"stuck", -1.9}, {"confused", -1.6}, {"confusing", -1.7},
    {"confusion", -1.6}, {"unclear", -1.3}, {"weird", -1.4}, {"strange", -1.3},
    {"odd", -1.1}, {"annoying", -2.0}, {"frustrating", -2.3},
    {"frustrated", -2.3}, {"frustration", -2.3}, {"painful", -2.2},
    {"pain", -1.9}, {"horrible", -2.9}, {"terrible", -2.8}, {"awful", -2.7},
    {"bad", -2.0}, {"badly", -2.1}, {"worse", -2.3}, {"worst", -2.9},
    {"ugly", -1.8}, {"messy", -1.6}, {"mess", -1.7}, {"nightmare", -2.8},
    {"impossible", -2.1}, {"unable", -1.7}, {"cant", -1.3}, {"wont", -1.2},
    {"doesnt", -0.9}, {"didnt", -0.8}, {"nothing", -1.0}, {"useless", -2.4},
    {"waste", -2.1}, {"wasted", -2.1}, {"slow", -1.6}, {"slower", -1.7},
    {"slowly", -1.4}, {"sluggish", -1.8}, {"bloated", -1.7},
    {"inefficient", -1.8}, {"unstable", -2.2}, {"unreliable", -2.2},
    {"inconsistent", -1.8}, {"missing", -1.5}, {"lost", -1.8},
    {"losing", -1.7}, {"loses", -1.7}, {"ignore", -1.1}, {"ignored", -1.2},
    {"ignores", -1.2}, {"complain", -1.7}, {"complains", -1.7},
    {"complaining", -1.7}, {"warn", -1.2}, {"warning", -1.3},
    {"warnings", -1.3}, {"deprecated", -1.2}, {"hack", -1.1},
    {"hacky", -1.5}, {"workaround", -0.8}, {"stacktrace", -1.4},
    {"traceback", -1.4}, {"npe", -2.2}, {"null", -0.9}, {"nil", -0.6},
    {"garbage", -2.2}, {"junk", -1.9}, {"throw", -1.0}, {"throws", -1.0},
    {"thrown", -1.0}, {"throwing", -1.1}, {"blocked", -1.6},
    {"blocking", -1.3}, {"stall", -1.8}, {"stalls", -1.8}, {"stalled", -1.8},
    {"timeout", -1.7}, {"timeouts", -1.7}, {"mismatch", -1.6},
    {"conflict", -1.6}, {"conflicts", -1.6}, {"collision", -1.5},
    {"race", -1.4}, {"stale", -1.3}, {"outdated", -1.2}, {"legacy", -0.8},
    {"difficult", -1.5}, {"hard", -1.1}, {"harder", -1.3}, {"complex", -0.9},
    {"complicated", -1.3}, {"tedious", -1.6}, {"sadly", -1.8},
    {"unfortunately", -1.6}, {"sorry", -1.1}, {"doubt", -1.2},
    {"suspicious", -1.5}, {"suspect", -1.2},
    // fixes and success
    {"fix", 1.8}, {"fixes", 1.8}, {"fixed", 2.1}, {"fixing", 1.5},
    {"solve", 1.9}, {"solves", 1.9}, {"solved", 2.3}, {"solving", 1.6},
    {"solution", 1.8}, {"solutions", 1.6}, {"resolve", 1.8},
    {"resolves", 1.8}, {"resolved", 2.2}, {"answer", 1.2}, {"answered", 1.4},
    {"works", 2.3}, {"work", 1.2}, {"worked", 2.2}, {"working", 1.9},
    {"workable", 1.5}, {"correct", 1.9}, {"correctly", 1.9}, {"right", 1.5},
    {"proper", 1.4}, {"properly", 1.6}, {"valid", 1.5}, {"success", 2.4},
    {"successful", 2.4}, {"successfully", 2.4}, {"succeed", 2.2},
    {"succeeds", 2.2}, {"succeeded", 2.3}, {"pass", 1.6}, {"passes", 1.7},
    {"passed", 1.9}, {"passing", 1.7}, {"stable", 1.7}, {"reliable", 2.0},
    {"robust", 2.0}, {"safe", 1.6}, {"safely", 1.6}, {"secure", 1.8},
    {"clean", 1.6}, {"cleaner", 1.7}, {"cleanly", 1.6}, {"neat", 1.8},
    {"elegant", 2.2}, {"simple", 1.3}, {"simpler", 1.5}, {"simplest", 1.6},
    {"easy", 1.7}, {"easier", 1.8}, {"easiest", 1.9}, {"fast", 1.6},
    {"faster", 1.8}, {"fastest", 1.9}, {"quick", 1.4}, {"quickly", 1.4},
    {"efficient", 1.9}, {"efficiently", 1.9}, {"improve", 1.7},
    {"improves", 1.7}, {"improved", 1.9}, {"improvement", 1.8},
    {"optimal", 1.9}, {"optimized", 1.7}, {"better", 1.7}, {"best", 2.3},
    {"good", 1.9}, {"great", 3.1}, {"excellent", 3.2}, {"perfect", 3.0},
    {"perfectly", 3.0}, {"awesome", 3.1}, {"amazing", 2.9},
    {"wonderful", 2.8}, {"fantastic", 3.0}, {"brilliant", 2.9},
    {"nice", 1.8}, {"nicely", 1.8}, {"love", 2.7}, {"like", 1.3},
    {"helpful", 2.1}, {"helps", 1.6}, {"helped", 1.8}, {"help", 1.2},
    {"thanks", 1.9}, {"thank", 1.9}, {"thankfully", 1.8}, {"appreciate", 2.0},
    {"appreciated", 2.0}, {"glad", 2.0}, {"happy", 2.4}, {"useful", 1.9},
    {"handy", 1.7}, {"recommended", 1.7}, {"recommend", 1.6}, {"clear", 1.3},
    {"clearly", 1.3}, {"readable", 1.5}, {"maintainable", 1.6}, {"yes", 1.0},
    {"correctness", 1.3}, {"win", 2.0}, {"wins", 2.0}, {"bonus", 1.7},
};

constexpr const char* kNegators[] = {
    "not", "no", "never", "none", "neither", "nor", "nothing", "nobody",
    "cannot", "cant", "dont", "doesnt", "didnt", "isnt", "wasnt", "wont",
    "couldnt", "shouldnt", "wouldnt", "hasnt", "havent", "hadnt", "aint",
    "without", "hardly", "barely", "rarely", "seldom",
};

struct BoosterEntry {
  const char* token;
  double increment;
};

constexpr BoosterEntry kBoosters[] = {
    {"very", 0.3},      {"really", 0.3},   {"extremely", 0.4},
    {"absolutely", 0.4}, {"completely", 0.35}, {"totally", 0.35},
    {"utterly", 0.35},  {"highly", 0.3},   {"incredibly", 0.4},
    {"especially", 0.25}, {"particularly", 0.25}, {"so", 0.2},
    {"too", 0.2},       {"quite", 0.15},   {"pretty", 0.15},
    {"fairly", 0.1},    {"super", 0.35},   {"definitely", 0.3},
    {"somewhat", -0.15}, {"slightly", -0.2}, {"marginally", -0.25},
    {"kinda", -0.15},   {"sorta", -0.15},  {"almost", -0.1},
};

std::vector<std::string> word_tokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char raw : text) {
    const unsigned char c = static_cast<unsigned char>(raw);
    if (std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (c == '\'') {
      continue;  // "don't" -> "dont"
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

}  // namespace

const SentimentLexicon& default_lexicon() {
  static const SentimentLexicon lexicon = [] {
    SentimentLexicon lex;
    for (const Entry& e : kDefaultValences) lex.valence[e.token] = e.valence;
    for (const char* n : kNegators) lex.negators.insert(n);
    for (const BoosterEntry& b : kBoosters) lex.boosters[b.token] = b.increment;
    return lex;
  }();
  return lexicon;
}

SentimentLexicon load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open lexicon file: " + path.string());
  SentimentLexicon lex;
  lex.negators = default_lexicon().negators;
  lex.boosters = default_lexicon().boosters;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0)
      throw std::runtime_error("lexicon line " + std::to_string(line_no) +
                               ": expected token<TAB>valence");
    const std::string token = line.substr(0, tab);
    double valence = 0.0;
    try {
      valence = std::stod(line.substr(tab + 1));
    } catch (const std::exception&) {
      throw std::runtime_error("lexicon line " + std::to_string(line_no) +
                               ": bad valence");
    }
    if (valence < -4.0 || valence > 4.0)
      throw std::runtime_error("lexicon line " + std::to_string(line_no) +
                               ": valence outside [-4, 4]");
    lex.valence[token] = valence;
  }
  return lex;
}

SentimentScore analyze_sentiment(std::string_view text,
                                 const SentimentLexicon& lexicon) {
  const std::vector<std::string> tokens = word_tokens(text);
  if (tokens.empty()) return SentimentScore{0.0, 0.0, 1.0};

  double pos_mass = 0.0;
  double neg_mass = 0.0;
  double neu_mass = 0.0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto it = lexicon.valence.find(tokens[i]);
    if (it == lexicon.valence.end() || it->second == 0.0) {
      // modifiers (negators, boosters) shape the next sentiment token and do
      // not add neutral mass of their own
      if (!lexicon.negators.contains(tokens[i]) &&
          !lexicon.boosters.contains(tokens[i]))
        neu_mass += 1.0;
      continue;
    }
    double v = it->second;
    int negations = 0;
    const std::size_t window_start = i >= 3 ? i - 3 : 0;
    for (std::size_t j = window_start; j < i; ++j) {
      if (lexicon.negators.contains(tokens[j])) ++negations;
      if (const auto b = lexicon.boosters.find(tokens[j]); b != lexicon.boosters.end())
        v += (v >= 0 ? b->second : -b->second);
    }
    if (negations % 2 == 1) v = -v;
    if (v > 0) pos_mass += v;
    else neg_mass += -v;
  }

  const double total = pos_mass + neg_mass + neu_mass;
  if (total == 0.0) return SentimentScore{0.0, 0.0, 1.0};
  return SentimentScore{pos_mass / total, neg_mass / total, neu_mass / total};
}

SentimentLabel decide_sentiment(const SentimentScore& score) {
  if (score.pos >= 0.5 && score.pos > score.neg) return SentimentLabel::Positive;
  if (score.neg >= 0.5 && score.neg > score.pos) return SentimentLabel::Negative;
  if (score.neu >= 0.5 && score.pos < 0.5 && score.neg < 0.5)
    return SentimentLabel::Neutral;
  return SentimentLabel::Neutral;
}

}  // namespace coderev
