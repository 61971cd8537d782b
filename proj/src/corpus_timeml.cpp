#include <algorithm>
#include <cctype>

#include "chronosr/corpus.hpp"
#include "chronosr/xml_lite.hpp"

namespace chronosr {

namespace {

bool is_open_punct(char c) { return c == '(' || c == '[' || c == '{' || c == '"'; }
bool is_close_punct(char c) {
  return c == ')' || c == ']' || c == '}' || c == '"' || c == '\'' || c == ',' ||
         c == ';' || c == ':' || c == '!' || c == '?';
}

void tokenize_chunk(std::string_view chunk, std::vector<std::string>& out) {
  std::vector<std::string> trailing;
  while (!chunk.empty() && is_open_punct(chunk.front())) {
    out.emplace_back(1, chunk.front());
    chunk.remove_prefix(1);
  }
  while (!chunk.empty() && is_close_punct(chunk.back())) {
    trailing.emplace_back(1, chunk.back());
    chunk.remove_suffix(1);
  }
  // A final period splits off unless the word also has an inner period
  // (keeps abbreviations like U.S. whole).
  if (chunk.size() > 1 && chunk.back() == '.' &&
      chunk.substr(0, chunk.size() - 1).find('.') == std::string_view::npos) {
    trailing.emplace_back(1, '.');
    chunk.remove_suffix(1);
  }
  if (!chunk.empty()) out.emplace_back(chunk);
  out.insert(out.end(), trailing.rbegin(), trailing.rend());
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) tokenize_chunk(text.substr(start, i - start), tokens);
  }
  return tokens;
}

namespace {

bool is_sentence_end(const std::string& token) {
  return token == "." || token == "!" || token == "?";
}

struct FlatToken {
  std::string text;
  int mention = -1;  // index into the mention list below, -1 = plain token
};

struct RawMention {
  bool is_event = false;
  std::string id;
  std::string value;
  std::string type;
};

// Collects the token stream of a subtree, tagging tokens that fall inside
// EVENT / TIMEX3 elements. The creation-time TIMEX3 is not a mention.
struct TextWalker {
  std::vector<FlatToken> tokens;
  std::vector<RawMention> mentions;
  ParseDiagnostics* diag;

  void walk(const XmlElement& element, int active_mention) {
    int mention = active_mention;
    const bool is_event = element.name == "EVENT";
    const bool is_timex = element.name == "TIMEX3";
    if (is_event || is_timex) {
      const std::string* fid = element.attribute("functionInDocument");
      const bool creation = fid && *fid == "CREATION_TIME";
      if (!creation) {
        RawMention m;
        m.is_event = is_event;
        if (is_event) {
          const std::string* eid = element.attribute("eid");
          m.id = eid ? *eid : "";
        } else {
          const std::string* tid = element.attribute("tid");
          m.id = tid ? *tid : "";
          const std::string* value = element.attribute("value");
          const std::string* type = element.attribute("type");
          m.value = value ? *value : "";
          m.type = type ? *type : "";
        }
        if (m.id.empty()) {
          if (diag) diag->notes.push_back("mention without id skipped");
        } else {
          mentions.push_back(std::move(m));
          mention = static_cast<int>(mentions.size()) - 1;
        }
      }
    }
    for (const XmlNode& child : element.children) {
      if (child.is_text) {
        for (std::string& tok : tokenize(child.text))
          tokens.push_back(FlatToken{std::move(tok), mention});
      } else {
        walk(child.element, mention);
      }
    }
  }
};

struct MentionSpan {
  int sentence = -1;
  int begin = -1;
  int end = -1;
};

}  // namespace

const EventMention* Document::find_event(std::string_view eid) const {
  for (const EventMention& e : events) {
    if (e.eid == eid) return &e;
  }
  return nullptr;
}

const std::vector<std::string>& Document::sentence(int index) const {
  if (index < 0 || index >= static_cast<int>(sentences.size()))
    throw Error("sentence index out of range in document " + id);
  return sentences[static_cast<std::size_t>(index)];
}

Document parse_timeml(std::string_view xml, std::string_view fallback_id,
                      ParseDiagnostics* diag) {
  const XmlElement root = xml_parse(xml);

  Document doc;
  if (const XmlElement* docid = root.find("DOCID")) {
    std::string id = docid->inner_text();
    const auto first = id.find_first_not_of(" \t\r\n");
    const auto last = id.find_last_not_of(" \t\r\n");
    doc.id = first == std::string::npos ? "" : id.substr(first, last - first + 1);
  }
  if (doc.id.empty()) doc.id = std::string(fallback_id);

  // Locate the creation time anywhere in the document.
  const XmlElement* dct_elem = nullptr;
  std::vector<const XmlElement*> stack{&root};
  while (!stack.empty() && !dct_elem) {
    const XmlElement* cur = stack.back();
    stack.pop_back();
    if (cur->name == "TIMEX3") {
      const std::string* fid = cur->attribute("functionInDocument");
      if (fid && *fid == "CREATION_TIME") {
        dct_elem = cur;
        break;
      }
    }
    for (auto it = cur->children.rbegin(); it != cur->children.rend(); ++it) {
      if (!it->is_text) stack.push_back(&it->element);
    }
  }
  if (!dct_elem)
    throw Error("document '" + doc.id + "' has no CREATION_TIME TIMEX3");
  const std::string* dct_value = dct_elem->attribute("value");
  if (!dct_value)
    throw Error("document '" + doc.id + "' creation time has no value");
  // Normalize against a placeholder: PRESENT_REF is meaningless for the DCT.
  std::optional<TimeAnchor> dct;
  try {
    dct = normalize_timex(*dct_value, "DATE", TimeAnchor{});
  } catch (const NormalizeError& e) {
    throw Error("document '" + doc.id + "' creation time: " + e.what());
  }
  if (!dct || !dct->is_certain_single_day())
    throw Error("document '" + doc.id + "' creation time '" + *dct_value +
                "' is not a certain single day");
  doc.dct = *dct;

  const XmlElement* text_region = root.find("TEXT");
  if (!text_region) text_region = &root;

  // Sentence segmentation: explicit <s> elements win over the splitter.
  std::vector<MentionSpan> spans;
  std::vector<RawMention> mentions;

  bool has_s = false;
  {
    std::vector<const XmlElement*> probe{text_region};
    while (!probe.empty()) {
      const XmlElement* cur = probe.back();
      probe.pop_back();
      if (cur->name == "s") {
        has_s = true;
        break;
      }
      for (const XmlNode& child : cur->children) {
        if (!child.is_text) probe.push_back(&child.element);
      }
    }
  }

  auto place_tokens = [&](const std::vector<FlatToken>& flat, int sentence_index,
                          std::vector<std::string>& sentence,
                          std::vector<MentionSpan>& span_table, int mention_offset) {
    for (const FlatToken& tok : flat) {
      sentence.push_back(tok.text);
      if (tok.mention >= 0) {
        MentionSpan& span = span_table[static_cast<std::size_t>(mention_offset + tok.mention)];
        const int index = static_cast<int>(sentence.size()) - 1;
        if (span.sentence < 0) {
          span.sentence = sentence_index;
          span.begin = index;
        }
        span.end = index + 1;
      }
    }
  };

  if (has_s) {
    std::vector<const XmlElement*> order;
    std::vector<const XmlElement*> work{text_region};
    // Document-order traversal collecting <s> elements.
    while (!work.empty()) {
      const XmlElement* cur = work.back();
      work.pop_back();
      if (cur->name == "s") {
        order.push_back(cur);
        continue;
      }
      for (auto it = cur->children.rbegin(); it != cur->children.rend(); ++it) {
        if (!it->is_text) work.push_back(&it->element);
      }
    }
    for (const XmlElement* s : order) {
      TextWalker walker{{}, {}, diag};
      walker.walk(*s, -1);
      const int mention_offset = static_cast<int>(mentions.size());
      spans.resize(spans.size() + walker.mentions.size());
      std::vector<std::string> sentence;
      place_tokens(walker.tokens, static_cast<int>(doc.sentences.size()), sentence,
                   spans, mention_offset);
      for (RawMention& m : walker.mentions) mentions.push_back(std::move(m));
      if (!sentence.empty()) doc.sentences.push_back(std::move(sentence));
    }
  } else {
    TextWalker walker{{}, {}, diag};
    walker.walk(*text_region, -1);
    mentions = std::move(walker.mentions);
    spans.resize(mentions.size());
    std::vector<std::string> sentence;
    for (const FlatToken& tok : walker.tokens) {
      sentence.push_back(tok.text);
      if (tok.mention >= 0) {
        MentionSpan& span = spans[static_cast<std::size_t>(tok.mention)];
        const int index = static_cast<int>(sentence.size()) - 1;
        if (span.sentence < 0) {
          span.sentence = static_cast<int>(doc.sentences.size());
          span.begin = index;
        }
        span.end = index + 1;
      }
      // Mention-internal periods never end a sentence.
      if (tok.mention < 0 && is_sentence_end(tok.text)) {
        doc.sentences.push_back(std::move(sentence));
        sentence.clear();
      }
    }
    if (!sentence.empty()) doc.sentences.push_back(std::move(sentence));
  }

  for (std::size_t i = 0; i < mentions.size(); ++i) {
    const RawMention& m = mentions[i];
    const MentionSpan& span = spans[i];
    if (span.sentence < 0) {
      if (diag) diag->notes.push_back("empty mention '" + m.id + "' skipped");
      continue;
    }
    if (m.is_event) {
      EventMention e;
      e.eid = m.id;
      e.sentence = span.sentence;
      e.span_begin = span.begin;
      e.span_end = span.end;
      doc.events.push_back(std::move(e));
    } else {
      TimexMention t;
      t.tid = m.id;
      t.sentence = span.sentence;
      t.span_begin = span.begin;
      t.span_end = span.end;
      t.value = m.value;
      t.type = m.type;
      try {
        t.anchor = normalize_timex(t.value, t.type, doc.dct);
      } catch (const NormalizeError& e) {
        t.anchor = std::nullopt;
        if (diag) {
          ++diag->unanchorable_timex_values;
          diag->notes.push_back(doc.id + "/" + t.tid + ": " + e.what());
        }
      }
      doc.timexes.push_back(std::move(t));
    }
  }

  return doc;
}

}  // namespace chronosr
