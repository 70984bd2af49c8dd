#include "coderev/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iostream>
#include <istream>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include <nlohmann/json.hpp>

namespace coderev {

std::string_view post_type_name(PostType type) {
  return type == PostType::Question ? "Question" : "Answer";
}

// ---------------------------------------------------------------------------
// XML row parsing
// ---------------------------------------------------------------------------

std::string xml_unescape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '&') {
      out.push_back(text[i++]);
      continue;
    }
    const std::size_t semi = text.find(';', i);
    if (semi == std::string_view::npos || semi - i > 10) {
      out.push_back(text[i++]);
      continue;
    }
    const std::string_view ent = text.substr(i + 1, semi - i - 1);
    if (ent == "lt") out.push_back('<');
    else if (ent == "gt") out.push_back('>');
    else if (ent == "amp") out.push_back('&');
    else if (ent == "quot") out.push_back('"');
    else if (ent == "apos") out.push_back('\'');
    else if (!ent.empty() && ent[0] == '#') {
      std::uint32_t cp = 0;
      bool ok = false;
      if (ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X')) {
        auto res = std::from_chars(ent.data() + 2, ent.data() + ent.size(), cp, 16);
        ok = res.ec == std::errc() && res.ptr == ent.data() + ent.size();
      } else {
        auto res = std::from_chars(ent.data() + 1, ent.data() + ent.size(), cp, 10);
        ok = res.ec == std::errc() && res.ptr == ent.data() + ent.size();
      }
      if (!ok) {
        out.push_back(text[i++]);
        continue;
      }
      // UTF-8 encode
      if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
      } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
      } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
      } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
      }
    } else {
      out.push_back(text[i]);
      i += 1;
      continue;
    }
    i = semi + 1;
  }
  return out;
}

namespace {

// Parses name="value" attributes from the inside of a <row ... /> element.
// Returns false on structural problems (unterminated value, missing '=').
bool parse_attributes(std::string_view row,
                      std::map<std::string, std::string, std::less<>>* attrs) {
  std::size_t i = 0;
  while (i < row.size()) {
    while (i < row.size() && std::isspace(static_cast<unsigned char>(row[i]))) ++i;
    if (i >= row.size()) break;
    if (row[i] == '/' || row[i] == '>') break;
    const std::size_t name_start = i;
    while (i < row.size() && row[i] != '=' &&
           !std::isspace(static_cast<unsigned char>(row[i])))
      ++i;
    if (i >= row.size() || row[i] != '=') return false;
    const std::string_view name = row.substr(name_start, i - name_start);
    ++i;
    if (i >= row.size() || row[i] != '"') return false;
    ++i;
    const std::size_t val_start = i;
    const std::size_t val_end = row.find('"', i);
    if (val_end == std::string_view::npos) return false;
    (*attrs)[std::string(name)] =
        xml_unescape(row.substr(val_start, val_end - val_start));
    i = val_end + 1;
  }
  return true;
}

std::vector<std::string> split_tags(std::string_view raw) {
  // Both historical formats: "<java><android>" and "|java|android|".
  std::vector<std::string> tags;
  std::string cur;
  for (char c : raw) {
    if (c == '<' || c == '>' || c == '|') {
      if (!cur.empty()) tags.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) tags.push_back(std::move(cur));
  return tags;
}

bool parse_int64(std::string_view s, std::int64_t* out) {
  auto res = std::from_chars(s.data(), s.data() + s.size(), *out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

bool parse_int(std::string_view s, int* out) {
  auto res = std::from_chars(s.data(), s.data() + s.size(), *out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

}  // namespace

void parse_posts_dump(std::istream& dump,
                      const std::function<void(SoPost&&)>& sink,
                      IngestReport* report) {
  if (!dump.good()) throw std::runtime_error("posts dump stream is not readable");
  IngestReport local;
  std::string line;
  while (std::getline(dump, line)) {
    const std::size_t row_pos = line.find("<row");
    if (row_pos == std::string::npos) continue;
    local.rows++;
    const std::size_t end_pos = line.rfind("/>");
    if (end_pos == std::string::npos || end_pos <= row_pos) {
      local.malformed_rows++;
      continue;
    }
    std::string_view inner(line.data() + row_pos + 4, end_pos - row_pos - 4);
    std::map<std::string, std::string, std::less<>> attrs;
    if (!parse_attributes(inner, &attrs)) {
      local.malformed_rows++;
      continue;
    }

    const auto id_it = attrs.find("Id");
    const auto type_it = attrs.find("PostTypeId");
    if (id_it == attrs.end() || type_it == attrs.end()) {
      local.malformed_rows++;
      continue;
    }
    SoPost post;
    int type_id = 0;
    if (!parse_int64(id_it->second, &post.post_id) ||
        !parse_int(type_it->second, &type_id)) {
      local.malformed_rows++;
      continue;
    }
    if (type_id != 1 && type_id != 2) {
      local.skipped_row_types++;
      continue;
    }
    post.type = type_id == 1 ? PostType::Question : PostType::Answer;
    if (auto it = attrs.find("Score"); it != attrs.end()) {
      if (!parse_int(it->second, &post.score)) {
        local.malformed_rows++;
        continue;
      }
    }
    if (auto it = attrs.find("ParentId"); it != attrs.end()) {
      if (!parse_int64(it->second, &post.parent_id)) {
        local.malformed_rows++;
        continue;
      }
    }
    if (auto it = attrs.find("Tags"); it != attrs.end())
      post.tags = split_tags(it->second);
    if (auto it = attrs.find("Title"); it != attrs.end())
      post.title = it->second;
    if (auto it = attrs.find("Body"); it != attrs.end())
      post.body = std::move(it->second);
    local.posts++;
    sink(std::move(post));
  }
  if (dump.bad()) throw std::runtime_error("posts dump stream failed mid-read");
  if (report) *report = local;
}

std::vector<SoPost> parse_posts_dump(std::istream& dump, IngestReport* report) {
  std::vector<SoPost> posts;
  parse_posts_dump(dump, [&](SoPost&& p) { posts.push_back(std::move(p)); },
                   report);
  return posts;
}

void resolve_answer_tags(std::vector<SoPost>& posts) {
  std::unordered_map<std::int64_t, const std::vector<std::string>*> question_tags;
  for (const SoPost& p : posts) {
    if (p.type == PostType::Question) question_tags[p.post_id] = &p.tags;
  }
  for (SoPost& p : posts) {
    if (p.type != PostType::Answer || !p.tags.empty() || p.parent_id == 0) continue;
    auto it = question_tags.find(p.parent_id);
    if (it != question_tags.end()) p.tags = *it->second;
  }
}

// ---------------------------------------------------------------------------
// Fragment extraction
// ---------------------------------------------------------------------------

namespace {

std::string html_unescape(std::string_view text) { return xml_unescape(text); }

std::string collapse_ws(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending = true;
      continue;
    }
    if (pending && !out.empty()) out.push_back(' ');
    pending = false;
    out.push_back(c);
  }
  return out;
}

// Case-insensitive search for an HTML tag open like "<pre" at or after pos;
// returns npos or the index of '<'.
std::size_t find_tag(std::string_view html, std::string_view tag, std::size_t pos) {
  while (pos + tag.size() + 1 <= html.size()) {
    const std::size_t lt = html.find('<', pos);
    if (lt == std::string_view::npos) return std::string_view::npos;
    bool match = lt + 1 + tag.size() < html.size();
    for (std::size_t i = 0; match && i < tag.size(); ++i) {
      if (std::tolower(static_cast<unsigned char>(html[lt + 1 + i])) != tag[i])
        match = false;
    }
    if (match) {
      const char after = html[lt + 1 + tag.size()];
      if (after == '>' || std::isspace(static_cast<unsigned char>(after)) ||
          after == '/')
        return lt;
    }
    pos = lt + 1;
  }
  return std::string_view::npos;
}

}  // namespace

std::string strip_html(std::string_view html) {
  std::string out;
  out.reserve(html.size());
  bool in_tag = false;
  for (char c : html) {
    if (c == '<') { in_tag = true; continue; }
    if (c == '>') { in_tag = false; out.push_back(' '); continue; }
    if (!in_tag) out.push_back(c);
  }
  return collapse_ws(html_unescape(out));
}

std::vector<CodeFragment> extract_fragments(const SoPost& post) {
  std::optional<Language> lang;
  for (const std::string& tag : post.tags) {
    if (auto l = language_from_tag(tag)) {
      lang = l;
      break;
    }
  }
  if (!lang) return {};

  std::vector<CodeFragment> frags;
  const std::string_view body = post.body;
  std::size_t cursor = 0;
  std::int32_t next_id = 0;
  while (true) {
    const std::size_t pre = find_tag(body, "pre", cursor);
    if (pre == std::string_view::npos) break;
    std::size_t open_end = body.find('>', pre);
    if (open_end == std::string_view::npos) break;
    std::size_t code_tag = find_tag(body, "code", open_end);
    if (code_tag == std::string_view::npos) break;
    // Only whitespace may sit between <pre...> and <code...>.
    bool only_ws = true;
    for (std::size_t i = open_end + 1; i < code_tag; ++i) {
      if (!std::isspace(static_cast<unsigned char>(body[i]))) { only_ws = false; break; }
    }
    if (!only_ws) {
      cursor = open_end + 1;
      continue;
    }
    const std::size_t code_open_end = body.find('>', code_tag);
    if (code_open_end == std::string_view::npos) break;
    const std::size_t close = body.find("</code>", code_open_end);
    if (close == std::string_view::npos) break;

    CodeFragment frag;
    frag.post_id = post.post_id;
    frag.frag_id = next_id;
    frag.language = lang;
    frag.code = html_unescape(body.substr(code_open_end + 1, close - code_open_end - 1));
    frag.preceding_text = strip_html(body.substr(cursor, pre - cursor));
    if (!frag.code.empty()) {
      frags.push_back(std::move(frag));
      ++next_id;
    }
    const std::size_t pre_close = body.find("</pre>", close);
    cursor = pre_close == std::string_view::npos ? close + 7 : pre_close + 6;
  }
  return frags;
}

std::size_t non_whitespace_length(std::string_view utf8) {
  auto is_unicode_space = [](std::uint32_t cp) {
    if (cp >= 0x09 && cp <= 0x0D) return true;
    switch (cp) {
      case 0x20: case 0x85: case 0xA0: case 0x1680:
      case 0x2028: case 0x2029: case 0x202F: case 0x205F: case 0x3000:
        return true;
      default:
        return cp >= 0x2000 && cp <= 0x200A;
    }
  };

  std::size_t count = 0;
  std::size_t i = 0;
  while (i < utf8.size()) {
    const unsigned char b = static_cast<unsigned char>(utf8[i]);
    std::uint32_t cp = b;
    std::size_t len = 1;
    if (b >= 0xF0) len = 4;
    else if (b >= 0xE0) len = 3;
    else if (b >= 0xC0) len = 2;
    if (len > 1) {
      if (i + len > utf8.size()) {
        ++count;  // truncated sequence: opaque byte
        ++i;
        continue;
      }
      cp = b & (0x7F >> len);
      bool valid = true;
      for (std::size_t k = 1; k < len; ++k) {
        const unsigned char cont = static_cast<unsigned char>(utf8[i + k]);
        if ((cont & 0xC0) != 0x80) { valid = false; break; }
        cp = (cp << 6) | (cont & 0x3F);
      }
      if (!valid) {
        ++count;
        ++i;
        continue;
      }
    }
    if (!is_unicode_space(cp)) ++count;
    i += len;
  }
  return count;
}

bool accept_fragment(const CodeFragment& frag) {
  return frag.language.has_value() && non_whitespace_length(frag.code) > 100;
}

// ---------------------------------------------------------------------------
// Training corpus
// ---------------------------------------------------------------------------

CorpusManifest load_training_corpus(const std::filesystem::path& root,
                                    Language lang) {
  namespace fs = std::filesystem;
  if (!fs::exists(root) || !fs::is_directory(root))
    throw std::runtime_error("corpus directory not found: " + root.string());

  const auto exts = source_extensions(lang);
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    const std::string ext = entry.path().extension().string();
    if (std::find(exts.begin(), exts.end(), ext) != exts.end())
      files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.string() < b.string(); });

  CorpusManifest manifest;
  manifest.language = lang;
  for (const fs::path& path : files) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      std::cerr << "warning: skipping unreadable corpus file " << path << "\n";
      continue;
    }
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    TokenSequence tokens = preprocess(text, lang);
    if (tokens.tokens.empty()) continue;
    CorpusDocument doc;
    doc.doc_id = static_cast<std::int32_t>(manifest.documents.size());
    doc.path = path.string();
    doc.tokens = std::move(tokens);
    manifest.documents.push_back(std::move(doc));
  }
  if (manifest.documents.empty())
    throw std::runtime_error("empty corpus: no usable " +
                             std::string(language_name(lang)) + " files under " +
                             root.string());
  manifest.source_description =
      root.string() + " (" + std::to_string(manifest.documents.size()) + " files, " +
      std::string(language_name(lang)) + ")";
  return manifest;
}

// ---------------------------------------------------------------------------
// Interchange records
// ---------------------------------------------------------------------------

std::string fragment_to_jsonl(const CodeFragment& frag) {
  nlohmann::json j{
      {"code", frag.code},
      {"fragId", frag.frag_id},
      {"language", frag.language ? language_name(*frag.language) : ""},
      {"postId", frag.post_id},
      {"precedingText", frag.preceding_text},
  };
  return j.dump();
}

CodeFragment fragment_from_jsonl(std::string_view line) {
  const nlohmann::json j = nlohmann::json::parse(line);
  CodeFragment frag;
  frag.post_id = j.at("postId").get<std::int64_t>();
  frag.frag_id = j.at("fragId").get<std::int32_t>();
  frag.code = j.at("code").get<std::string>();
  frag.preceding_text = j.at("precedingText").get<std::string>();
  const std::string lang = j.at("language").get<std::string>();
  if (!lang.empty()) frag.language = parse_language(lang);
  return frag;
}

}  // namespace coderev
