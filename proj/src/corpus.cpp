#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "chronosr/corpus.hpp"

namespace chronosr {

using ordered_json = nlohmann::ordered_json;

std::string_view link_kind_name(LinkKind kind) {
  return kind == LinkKind::EventDct ? "E-D" : "E-T";
}

LinkKind link_kind_from_name(std::string_view name) {
  if (name == "E-D") return LinkKind::EventDct;
  if (name == "E-T") return LinkKind::EventTimex;
  throw ParseError("unknown link kind '" + std::string(name) + "'", 0);
}

Document load_event_times(std::string_view tsv, const Document& doc,
                          EventTimeLoadStats* stats) {
  Document out = doc;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos <= tsv.size()) {
    std::size_t eol = tsv.find('\n', pos);
    if (eol == std::string_view::npos) eol = tsv.size();
    std::string_view line = tsv.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') {
      if (pos > tsv.size()) break;
      continue;
    }

    const std::size_t tab1 = line.find('\t');
    const std::size_t tab2 = tab1 == std::string_view::npos
                                 ? std::string_view::npos
                                 : line.find('\t', tab1 + 1);
    if (tab2 == std::string_view::npos)
      throw ParseError("event-time line " + std::to_string(line_no) +
                           " needs doc<TAB>eid<TAB>anchor",
                       pos);
    const std::string_view doc_id = line.substr(0, tab1);
    const std::string_view eid = line.substr(tab1 + 1, tab2 - tab1 - 1);
    const std::string_view anchor = line.substr(tab2 + 1);

    if (doc_id != out.id) {
      if (stats) ++stats->other_documents;
      continue;
    }
    EventMention* target = nullptr;
    for (EventMention& e : out.events) {
      if (e.eid == eid) {
        target = &e;
        break;
      }
    }
    if (!target) {
      if (stats) ++stats->unknown_eids;
      continue;
    }
    if (anchor == "-") {
      target->gold_anchor = std::nullopt;
      target->gold_unanchorable = true;
    } else {
      target->gold_anchor = parse_anchor(anchor);
      target->gold_unanchorable = false;
    }
    if (stats) ++stats->applied;
    if (pos > tsv.size()) break;
  }
  return out;
}

namespace {

int mention_token(int span_begin, int span_end, MentionTokenPolicy policy) {
  return policy == MentionTokenPolicy::Last ? span_end - 1 : span_begin;
}

}  // namespace

std::vector<LinkInstance> generate_links(const Document& doc, int sw,
                                         MentionTokenPolicy policy) {
  if (sw < 0) throw Error("sentence window must be non-negative");
  std::vector<LinkInstance> links;
  for (const EventMention& event : doc.events) {
    LinkInstance ed;
    ed.kind = LinkKind::EventDct;
    ed.doc_id = doc.id;
    ed.eid = event.eid;
    ed.target.is_dct = true;
    ed.sentence_distance = 0;
    ed.tokens = doc.sentence(event.sentence);
    ed.event_position = mention_token(event.span_begin, event.span_end, policy);
    ed.timex_position = -1;
    ed.target_anchor = doc.dct;
    if (event.gold_anchor) ed.gold = induce_sr(*event.gold_anchor, doc.dct);
    links.push_back(std::move(ed));

    for (const TimexMention& timex : doc.timexes) {
      if (!timex.anchor) continue;
      const int distance = std::abs(event.sentence - timex.sentence);
      if (distance > sw) continue;
      const int lo = std::min(event.sentence, timex.sentence);
      const int hi = std::max(event.sentence, timex.sentence);

      LinkInstance et;
      et.kind = LinkKind::EventTimex;
      et.doc_id = doc.id;
      et.eid = event.eid;
      et.target.is_dct = false;
      et.target.tid = timex.tid;
      et.target.sentence = timex.sentence;
      et.target.token = timex.span_begin;
      et.sentence_distance = distance;
      std::vector<int> offsets(static_cast<std::size_t>(hi - lo + 1), 0);
      for (int s = lo; s <= hi; ++s) {
        offsets[static_cast<std::size_t>(s - lo)] =
            static_cast<int>(et.tokens.size());
        const auto& sent = doc.sentence(s);
        et.tokens.insert(et.tokens.end(), sent.begin(), sent.end());
      }
      et.event_position =
          offsets[static_cast<std::size_t>(event.sentence - lo)] +
          mention_token(event.span_begin, event.span_end, policy);
      et.timex_position =
          offsets[static_cast<std::size_t>(timex.sentence - lo)] +
          mention_token(timex.span_begin, timex.span_end, policy);
      et.target_anchor = *timex.anchor;
      if (event.gold_anchor) et.gold = induce_sr(*event.gold_anchor, *timex.anchor);
      links.push_back(std::move(et));
    }
  }
  return links;
}

namespace {

ordered_json anchor_json(const TimeAnchor& anchor) {
  return anchor_to_string(anchor);
}

TimeAnchor anchor_from_json(const ordered_json& j, const char* what) {
  if (!j.is_string()) throw ParseError(std::string(what) + " must be a string", 0);
  return parse_anchor(j.get<std::string>());
}

int int_field(const ordered_json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer())
    throw ParseError(std::string("missing integer field '") + key + "'", 0);
  return j[key].get<int>();
}

std::string string_field(const ordered_json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string())
    throw ParseError(std::string("missing string field '") + key + "'", 0);
  return j[key].get<std::string>();
}

}  // namespace

std::string document_to_json(const Document& doc) {
  ordered_json j;
  j["id"] = doc.id;
  j["dct"] = anchor_json(doc.dct);
  j["sentences"] = doc.sentences;
  ordered_json events = ordered_json::array();
  for (const EventMention& e : doc.events) {
    ordered_json je;
    je["eid"] = e.eid;
    je["sentence"] = e.sentence;
    je["span_begin"] = e.span_begin;
    je["span_end"] = e.span_end;
    if (e.gold_anchor) je["gold_anchor"] = anchor_json(*e.gold_anchor);
    if (e.gold_unanchorable) je["gold_unanchorable"] = true;
    events.push_back(std::move(je));
  }
  j["events"] = std::move(events);
  ordered_json timexes = ordered_json::array();
  for (const TimexMention& t : doc.timexes) {
    ordered_json jt;
    jt["tid"] = t.tid;
    jt["sentence"] = t.sentence;
    jt["span_begin"] = t.span_begin;
    jt["span_end"] = t.span_end;
    jt["value"] = t.value;
    jt["type"] = t.type;
    if (t.anchor) jt["anchor"] = anchor_json(*t.anchor);
    timexes.push_back(std::move(jt));
  }
  j["timexes"] = std::move(timexes);
  return j.dump(2) + "\n";
}

Document document_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad document JSON: ") + e.what(), 0);
  }
  Document doc;
  doc.id = string_field(j, "id");
  if (!j.contains("dct")) throw ParseError("document JSON lacks 'dct'", 0);
  doc.dct = anchor_from_json(j["dct"], "dct");
  if (!doc.dct.is_certain_single_day())
    throw Error("document '" + doc.id + "' dct is not a certain single day");
  if (!j.contains("sentences") || !j["sentences"].is_array())
    throw ParseError("document JSON lacks 'sentences'", 0);
  for (const auto& sent : j["sentences"]) {
    std::vector<std::string> tokens;
    for (const auto& tok : sent) tokens.push_back(tok.get<std::string>());
    doc.sentences.push_back(std::move(tokens));
  }
  if (j.contains("events")) {
    for (const auto& je : j["events"]) {
      EventMention e;
      e.eid = string_field(je, "eid");
      e.sentence = int_field(je, "sentence");
      e.span_begin = int_field(je, "span_begin");
      e.span_end = int_field(je, "span_end");
      if (je.contains("gold_anchor"))
        e.gold_anchor = anchor_from_json(je["gold_anchor"], "gold_anchor");
      if (je.contains("gold_unanchorable"))
        e.gold_unanchorable = je["gold_unanchorable"].get<bool>();
      doc.events.push_back(std::move(e));
    }
  }
  if (j.contains("timexes")) {
    for (const auto& jt : j["timexes"]) {
      TimexMention t;
      t.tid = string_field(jt, "tid");
      t.sentence = int_field(jt, "sentence");
      t.span_begin = int_field(jt, "span_begin");
      t.span_end = int_field(jt, "span_end");
      t.value = string_field(jt, "value");
      t.type = string_field(jt, "type");
      if (jt.contains("anchor")) t.anchor = anchor_from_json(jt["anchor"], "anchor");
      doc.timexes.push_back(std::move(t));
    }
  }
  return doc;
}

std::string link_to_json_line(const LinkInstance& link) {
  ordered_json j;
  j["kind"] = std::string(link_kind_name(link.kind));
  j["doc_id"] = link.doc_id;
  j["eid"] = link.eid;
  if (link.target.is_dct) {
    j["target"] = "DCT";
  } else {
    ordered_json t;
    t["tid"] = link.target.tid;
    t["sentence"] = link.target.sentence;
    t["token"] = link.target.token;
    j["target"] = std::move(t);
  }
  j["sentence_distance"] = link.sentence_distance;
  j["tokens"] = link.tokens;
  j["event_position"] = link.event_position;
  if (link.timex_position >= 0) j["timex_position"] = link.timex_position;
  j["target_anchor"] = anchor_to_string(link.target_anchor);
  if (link.gold) {
    ordered_json labels = ordered_json::array();
    for (SRLabel label : link.gold->labels())
      labels.push_back(std::string(sr_label_name(label)));
    j["gold"] = std::move(labels);
  }
  return j.dump();
}

LinkInstance link_from_json_line(const std::string& line) {
  ordered_json j;
  try {
    j = ordered_json::parse(line);
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad link JSON: ") + e.what(), 0);
  }
  LinkInstance link;
  link.kind = link_kind_from_name(string_field(j, "kind"));
  link.doc_id = string_field(j, "doc_id");
  link.eid = string_field(j, "eid");
  if (!j.contains("target")) throw ParseError("link JSON lacks 'target'", 0);
  if (j["target"].is_string()) {
    if (j["target"].get<std::string>() != "DCT")
      throw ParseError("string target must be \"DCT\"", 0);
    link.target.is_dct = true;
  } else {
    link.target.is_dct = false;
    link.target.tid = string_field(j["target"], "tid");
    link.target.sentence = int_field(j["target"], "sentence");
    link.target.token = int_field(j["target"], "token");
  }
  link.sentence_distance = int_field(j, "sentence_distance");
  if (!j.contains("tokens") || !j["tokens"].is_array())
    throw ParseError("link JSON lacks 'tokens'", 0);
  for (const auto& tok : j["tokens"]) link.tokens.push_back(tok.get<std::string>());
  link.event_position = int_field(j, "event_position");
  link.timex_position = j.contains("timex_position") ? int_field(j, "timex_position") : -1;
  link.target_anchor = parse_anchor(string_field(j, "target_anchor"));
  if (j.contains("gold")) {
    const auto& labels = j["gold"];
    if (!labels.is_array() || labels.size() != static_cast<std::size_t>(kNumSRs))
      throw ParseError("'gold' must list one label per sub-relation", 0);
    SRVector sr;
    for (int i = 0; i < kNumSRs; ++i)
      sr.set(i, sr_label_from_name(labels[static_cast<std::size_t>(i)].get<std::string>()));
    link.gold = sr;
  }
  const bool consistent = (link.kind == LinkKind::EventDct) ==
                          (link.target.is_dct && link.timex_position < 0);
  if (!consistent) throw ParseError("link kind does not match target shape", 0);
  return link;
}

std::vector<LinkInstance> read_link_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open link file " + path);
  std::vector<LinkInstance> links;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      links.push_back(link_from_json_line(line));
    } catch (const ParseError& e) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": " + e.what(),
                       static_cast<std::size_t>(line_no));
    }
  }
  return links;
}

void write_link_file(const std::string& path, const std::vector<LinkInstance>& links) {
  std::ostringstream out;
  for (const LinkInstance& link : links) out << link_to_json_line(link) << '\n';
  write_file(path, out.str());
}

std::vector<Document> load_corpus(const std::vector<std::string>& paths,
                                  ParseDiagnostics* diag) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  for (const std::string& raw : paths) {
    const fs::path p(raw);
    std::error_code ec;
    if (fs::is_directory(p, ec)) {
      for (const auto& entry : fs::directory_iterator(p)) {
        if (!entry.is_regular_file()) continue;
        const std::string ext = entry.path().extension().string();
        if (ext == ".tml" || ext == ".xml" || ext == ".json")
          files.push_back(entry.path());
      }
    } else if (fs::is_regular_file(p, ec)) {
      files.push_back(p);
    } else {
      throw IoError("corpus path does not exist: " + raw);
    }
  }
  std::sort(files.begin(), files.end());

  std::vector<Document> docs;
  for (const fs::path& file : files) {
    const std::string text = read_file(file.string());
    const std::string ext = file.extension().string();
    Document doc = ext == ".json"
                       ? document_from_json(text)
                       : parse_timeml(text, file.stem().string(), diag);
    docs.push_back(std::move(doc));
  }
  std::sort(docs.begin(), docs.end(),
            [](const Document& a, const Document& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < docs.size(); ++i) {
    if (docs[i].id == docs[i - 1].id)
      throw Error("duplicate document id '" + docs[i].id + "'");
  }
  return docs;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (!in.good() && !in.eof()) throw IoError("failed reading " + path);
  return buffer.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out.good()) throw IoError("failed writing " + path);
}

}  // namespace chronosr
