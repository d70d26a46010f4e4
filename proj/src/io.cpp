#include "motkit/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace motkit {

namespace {

[[noreturn]] void fail(const std::string& path, long line, const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

std::string render_real(Real v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

Real parse_real(std::string_view field, const std::string& path, long line) {
  Real value = 0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc() || res.ptr != end) fail(path, line, "bad number '" + std::string(field) + "'");
  if (!std::isfinite(value)) fail(path, line, "non-finite number");
  return value;
}

std::int64_t parse_int(std::string_view field, const std::string& path, long line) {
  std::int64_t value = 0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc() || res.ptr != end) fail(path, line, "bad integer '" + std::string(field) + "'");
  return value;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open for reading");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  return out;
}

}  // namespace

MotSequence read_mot(const std::string& path) {
  std::ifstream in = open_in(path);
  MotSequence seq;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    const auto fields = split_fields(line);
    if (fields.size() != 9) fail(path, lineno, "expected 9 comma-separated fields");
    MotRecord rec;
    rec.frame = static_cast<int>(parse_int(fields[0], path, lineno));
    rec.id = parse_int(fields[1], path, lineno);
    rec.box = {parse_real(fields[2], path, lineno), parse_real(fields[3], path, lineno),
               parse_real(fields[4], path, lineno), parse_real(fields[5], path, lineno)};
    rec.score = parse_real(fields[6], path, lineno);
    rec.category = static_cast<int>(parse_int(fields[7], path, lineno));
    rec.visibility = parse_real(fields[8], path, lineno);

    if (rec.frame < 1) fail(path, lineno, "frame must be >= 1");
    if (rec.frame < seq.num_frames) fail(path, lineno, "frames must be non-decreasing");
    if (rec.id < 1) fail(path, lineno, "id must be >= 1");
    if (!(rec.box.w > 0) || !(rec.box.h > 0)) fail(path, lineno, "box must have positive size");
    seq.num_frames = rec.frame;
    seq.records.push_back(rec);
  }
  return seq;
}

void write_mot(const std::string& path, const std::vector<MotRecord>& records) {
  int last_frame = 0;
  std::ostringstream body;
  for (const MotRecord& rec : records) {
    if (rec.frame < 1 || rec.frame < last_frame)
      throw std::invalid_argument("write_mot: records must be in non-decreasing frame order");
    if (rec.id < 1) throw std::invalid_argument("write_mot: id must be >= 1");
    if (!(rec.box.w > 0) || !(rec.box.h > 0))
      throw std::invalid_argument("write_mot: box must have positive size");
    for (Real v : {rec.box.x, rec.box.y, rec.box.w, rec.box.h, rec.score, rec.visibility})
      if (!std::isfinite(v)) throw std::invalid_argument("write_mot: non-finite value");
    last_frame = rec.frame;
    body << rec.frame << ',' << rec.id << ',' << render_real(rec.box.x) << ','
         << render_real(rec.box.y) << ',' << render_real(rec.box.w) << ','
         << render_real(rec.box.h) << ',' << render_real(rec.score) << ',' << rec.category << ','
         << render_real(rec.visibility) << '\n';
  }
  std::ofstream out = open_out(path);
  out << body.str();
  if (!out) throw std::runtime_error(path + ": write failed");
}

std::vector<FrameObjects> mot_to_frames(const MotSequence& seq, int min_frames) {
  std::vector<FrameObjects> frames(std::max(seq.num_frames, min_frames));
  for (const MotRecord& rec : seq.records)
    frames[rec.frame - 1].push_back({rec.id, rec.category, rec.box});
  return frames;
}

DetectionSequence read_detections(const std::string& path) {
  using nlohmann::json;
  std::ifstream in = open_in(path);
  DetectionSequence seq;
  std::string line;
  long lineno = 0;
  int last_frame = 0;
  bool have_header = false;
  int declared_frames = 0;

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      fail(path, lineno, std::string("bad json: ") + e.what());
    }
    try {
      if (!have_header) {
        seq.dim = j.at("dim").get<int>();
        declared_frames = j.at("frames").get<int>();
        if (seq.dim < 0 || declared_frames < 0) fail(path, lineno, "negative header field");
        seq.frames.resize(declared_frames);
        have_header = true;
        continue;
      }
      Detection det;
      const int frame = j.at("frame").get<int>();
      if (frame < 1 || frame > declared_frames) fail(path, lineno, "frame outside header range");
      if (frame < last_frame) fail(path, lineno, "frames must be non-decreasing");
      const auto& box = j.at("box");
      if (!box.is_array() || box.size() != 4) fail(path, lineno, "box must be [x,y,w,h]");
      det.box = {box[0].get<Real>(), box[1].get<Real>(), box[2].get<Real>(), box[3].get<Real>()};
      det.score = j.at("score").get<Real>();
      det.category = j.at("category").get<int>();
      const auto& emb = j.at("embedding");
      if (!emb.is_array() || static_cast<int>(emb.size()) != seq.dim)
        fail(path, lineno, "embedding length does not match header dim");
      det.embedding = Vector(seq.dim);
      for (int i = 0; i < seq.dim; ++i) det.embedding[i] = emb[i].get<Real>();
      det.source_id = j.value("source", std::int64_t{-1});
      for (Real v : {det.box.x, det.box.y, det.box.w, det.box.h, det.score})
        if (!std::isfinite(v)) fail(path, lineno, "non-finite value");
      if (!det.embedding.allFinite()) fail(path, lineno, "non-finite embedding");
      last_frame = frame;
      seq.frames[frame - 1].push_back(std::move(det));
    } catch (const json::exception& e) {
      fail(path, lineno, std::string("bad record: ") + e.what());
    }
  }
  if (!have_header) throw std::runtime_error(path + ": missing header line");
  return seq;
}

void write_detections(const std::string& path, const DetectionSequence& seq) {
  using nlohmann::json;
  std::ostringstream body;
  body << json{{"dim", seq.dim}, {"frames", seq.num_frames()}}.dump() << '\n';
  for (std::size_t f = 0; f < seq.frames.size(); ++f) {
    for (const Detection& det : seq.frames[f]) {
      if (det.embedding.size() != seq.dim)
        throw std::invalid_argument("write_detections: embedding length does not match dim");
      for (Real v : {det.box.x, det.box.y, det.box.w, det.box.h, det.score})
        if (!std::isfinite(v)) throw std::invalid_argument("write_detections: non-finite value");
      if (!det.embedding.allFinite())
        throw std::invalid_argument("write_detections: non-finite embedding");
      json j;
      j["frame"] = static_cast<int>(f) + 1;
      j["box"] = {det.box.x, det.box.y, det.box.w, det.box.h};
      j["score"] = det.score;
      j["category"] = det.category;
      j["embedding"] = std::vector<Real>(det.embedding.data(),
                                         det.embedding.data() + det.embedding.size());
      j["source"] = det.source_id;
      body << j.dump() << '\n';
    }
  }
  std::ofstream out = open_out(path);
  out << body.str();
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace motkit
