#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chronosr/sr.hpp"
#include "chronosr/timecore.hpp"

namespace chronosr {

struct EventMention {
  std::string eid;
  int sentence = 0;
  int span_begin = 0;  // token index, inclusive
  int span_end = 0;    // token index, exclusive; span is never empty
  std::optional<TimeAnchor> gold_anchor;
  bool gold_unanchorable = false;  // annotated as impossible to anchor
};

struct TimexMention {
  std::string tid;
  int sentence = 0;
  int span_begin = 0;
  int span_end = 0;
  std::string value;  // normalized TIMEX3 value attribute
  std::string type;   // DATE / TIME / DURATION / SET
  std::optional<TimeAnchor> anchor;  // absent when not anchorable
};

struct Document {
  std::string id;
  TimeAnchor dct;  // always a certain single day
  std::vector<std::vector<std::string>> sentences;
  std::vector<EventMention> events;
  std::vector<TimexMention> timexes;

  const EventMention* find_event(std::string_view eid) const;
  const std::vector<std::string>& sentence(int index) const;
};

struct ParseDiagnostics {
  int unanchorable_timex_values = 0;  // normalization failed, mention kept
  std::vector<std::string> notes;
};

/// Parses one TimeML document. Mentions come from EVENT and TIMEX3 elements;
/// the document creation time is the TIMEX3 with
/// functionInDocument="CREATION_TIME" and is required. Sentences come from
/// <s> elements when present, otherwise from a simple punctuation-based
/// splitter over the TEXT region. Throws ParseError on malformed XML and
/// Error when the DCT is missing or not a single certain day.
Document parse_timeml(std::string_view xml, std::string_view fallback_id = "",
                      ParseDiagnostics* diag = nullptr);

/// Whitespace tokenizer with punctuation peeling, shared by the TimeML
/// reader and tests.
std::vector<std::string> tokenize(std::string_view text);

struct EventTimeLoadStats {
  int applied = 0;
  int unknown_eids = 0;      // listed eid absent from the document
  int other_documents = 0;   // lines for different document ids
};

/// Applies gold time anchors from tab-separated lines
/// `doc_id<TAB>eid<TAB>anchor_string` to one document. The anchor string "-"
/// marks an event annotated as not anchorable. Unknown eids are skipped and
/// counted; an unparseable anchor is a hard error.
Document load_event_times(std::string_view tsv, const Document& doc,
                          EventTimeLoadStats* stats = nullptr);

enum class LinkKind { EventDct, EventTimex };
std::string_view link_kind_name(LinkKind kind);       // "E-D" / "E-T"
LinkKind link_kind_from_name(std::string_view name);  // throws ParseError

/// Which token of a multi-token mention stands for the mention.
enum class MentionTokenPolicy { Last, First };

struct TargetRef {
  bool is_dct = true;
  std::string tid;   // timex targets only
  int sentence = 0;  // absolute location of the timex, for priority ordering
  int token = 0;
};

/// One classification example: an event paired with the DCT or with a timex.
/// E-D instances carry the event's sentence; E-T instances carry the token
/// window spanning both mentions.
struct LinkInstance {
  LinkKind kind = LinkKind::EventDct;
  std::string doc_id;
  std::string eid;
  TargetRef target;
  int sentence_distance = 0;  // 0 for E-D
  std::vector<std::string> tokens;
  int event_position = 0;    // index into tokens
  int timex_position = -1;   // index into tokens; -1 for E-D
  TimeAnchor target_anchor;
  std::optional<SRVector> gold;
};

/// Generates, per event, one E-D instance plus one E-T instance per
/// anchorable timex within `sw` sentences. Gold SR vectors are induced when
/// the event has a gold anchor.
std::vector<LinkInstance> generate_links(
    const Document& doc, int sw,
    MentionTokenPolicy policy = MentionTokenPolicy::Last);

// --- plain JSON document format (mirrors Document field for field) ---
Document document_from_json(const std::string& text);
std::string document_to_json(const Document& doc);

// --- line-delimited JSON link datasets ---
std::string link_to_json_line(const LinkInstance& link);
LinkInstance link_from_json_line(const std::string& line);
std::vector<LinkInstance> read_link_file(const std::string& path);
void write_link_file(const std::string& path, const std::vector<LinkInstance>& links);

/// Loads every *.tml / *.xml (TimeML) and *.json (document JSON) file under
/// the given directories (a path may also name a single file). Documents are
/// returned sorted by id; duplicate ids are an error.
std::vector<Document> load_corpus(const std::vector<std::string>& paths,
                                  ParseDiagnostics* diag = nullptr);

/// Reads a whole file into memory (IoError on failure).
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace chronosr
