// wbanemu - body-area channel emulator and adaptive network simulator
// Copyright (C) 2026 The wbanemu authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "wban/bvh.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "wban/error.hpp"

namespace wban {

namespace {

constexpr std::array<std::string_view, 6> kChannelNames = {
    "Xposition", "Yposition", "Zposition", "Xrotation", "Yrotation", "Zrotation"};

struct Token {
    std::string_view text;
    std::size_t line;
};

// Splits on whitespace; braces are always standalone tokens.
std::vector<Token> tokenize(std::string_view text, std::size_t first_line) {
    std::vector<Token> tokens;
    std::size_t line = first_line;
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (c == '\n') {
            ++line;
            ++i;
        } else if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
            ++i;
        } else if (c == '{' || c == '}') {
            tokens.push_back({text.substr(i, 1), line});
            ++i;
        } else {
            std::size_t j = i;
            while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) &&
                   text[j] != '{' && text[j] != '}')
                ++j;
            tokens.push_back({text.substr(i, j - i), line});
            i = j;
        }
    }
    return tokens;
}

std::optional<double> to_double(std::string_view s) {
    double v = 0.0;
    const char *first = s.data();
    const char *last = s.data() + s.size();
    if (first != last && *first == '+')
        ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || !std::isfinite(v))
        return std::nullopt;
    return v;
}

class HierarchyParser {
  public:
    HierarchyParser(std::vector<Token> tokens, double scale) : tokens_(std::move(tokens)), scale_(scale) {}

    Joint parse() {
        expect("HIERARCHY");
        expect("ROOT");
        Joint root = parse_joint_body(false);
        if (pos_ != tokens_.size())
            throw ParseError(tokens_[pos_].line, "unexpected token '" + std::string(tokens_[pos_].text) +
                                                     "' after root joint");
        return root;
    }

  private:
    const Token &peek() const {
        if (pos_ >= tokens_.size())
            throw ParseError(last_line(), "unexpected end of hierarchy");
        return tokens_[pos_];
    }
    const Token &next() {
        const Token &t = peek();
        ++pos_;
        return t;
    }
    void expect(std::string_view word) {
        const Token &t = next();
        if (t.text != word)
            throw ParseError(t.line, "expected '" + std::string(word) + "', found '" + std::string(t.text) + "'");
    }
    std::size_t last_line() const { return tokens_.empty() ? 1 : tokens_.back().line; }

    double number() {
        const Token &t = next();
        auto v = to_double(t.text);
        if (!v)
            throw ParseError(t.line, "malformed number '" + std::string(t.text) + "'");
        return *v;
    }

    Vec3 offset() {
        expect("OFFSET");
        Vec3 o;
        o.x() = number();
        o.y() = number();
        o.z() = number();
        return o * scale_;
    }

    // After ROOT/JOINT keyword: name { OFFSET .. CHANNELS .. children }
    Joint parse_joint_body(bool is_end_site) {
        Joint joint;
        joint.is_end_site = is_end_site;
        if (is_end_site) {
            joint.name = "End Site";
        } else {
            const Token &name = next();
            if (name.text == "{" || name.text == "}")
                throw ParseError(name.line, "missing joint name");
            joint.name = std::string(name.text);
        }
        expect("{");
        joint.offset = offset();
        if (is_end_site) {
            const Token &t = next();
            if (t.text != "}")
                throw ParseError(t.line, "end site may only contain OFFSET, found '" + std::string(t.text) + "'");
            return joint;
        }

        expect("CHANNELS");
        const Token &count_tok = next();
        int count = 0;
        auto [ptr, ec] = std::from_chars(count_tok.text.data(), count_tok.text.data() + count_tok.text.size(), count);
        if (ec != std::errc{} || ptr != count_tok.text.data() + count_tok.text.size() || count < 0 || count > 6)
            throw ParseError(count_tok.line, "invalid channel count '" + std::string(count_tok.text) + "'");
        for (int k = 0; k < count; ++k) {
            const Token &t = next();
            auto c = channel_from_name(t.text);
            if (!c)
                throw ParseError(t.line, "unknown channel '" + std::string(t.text) + "'");
            if (std::find(joint.channels.begin(), joint.channels.end(), *c) != joint.channels.end())
                throw ParseError(t.line, "duplicate channel '" + std::string(t.text) + "' in joint " + joint.name);
            joint.channels.push_back(*c);
        }

        while (true) {
            const Token &t = next();
            if (t.text == "}")
                break;
            if (t.text == "JOINT") {
                joint.children.push_back(parse_joint_body(false));
            } else if (t.text == "End") {
                expect("Site");
                joint.children.push_back(parse_joint_body(true));
            } else {
                throw ParseError(t.line, "unexpected token '" + std::string(t.text) + "' in joint " + joint.name);
            }
        }
        return joint;
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    double scale_;
};

void flatten_into(const Joint &joint, int parent, std::size_t &channels, std::vector<FlatJoint> &out) {
    const int self = static_cast<int>(out.size());
    out.push_back({&joint, parent, channels});
    channels += joint.channels.size();
    for (const Joint &child : joint.children)
        flatten_into(child, self, channels, out);
}

struct Line {
    std::string_view text;
    std::size_t number;
};

std::vector<Line> split_lines(std::string_view text) {
    std::vector<Line> lines;
    std::size_t start = 0;
    std::size_t number = 1;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos)
            end = text.size();
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        lines.push_back({line, number++});
        if (end == text.size())
            break;
        start = end + 1;
    }
    return lines;
}

bool is_blank(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

} // namespace

std::string_view channel_name(Channel c) noexcept { return kChannelNames[static_cast<std::size_t>(c)]; }

std::optional<Channel> channel_from_name(std::string_view name) noexcept {
    for (std::size_t i = 0; i < kChannelNames.size(); ++i)
        if (kChannelNames[i] == name)
            return static_cast<Channel>(i);
    return std::nullopt;
}

std::vector<FlatJoint> flatten(const Joint &root) {
    std::vector<FlatJoint> out;
    std::size_t channels = 0;
    flatten_into(root, -1, channels, out);
    return out;
}

std::size_t count_joints(const Joint &root, bool include_end_sites) {
    std::size_t n = (root.is_end_site && !include_end_sites) ? 0 : 1;
    for (const Joint &c : root.children)
        n += count_joints(c, include_end_sites);
    return n;
}

MotionClip parse_bvh(std::string_view text, double unit_scale) {
    if (!(unit_scale > 0.0) || !std::isfinite(unit_scale))
        throw Error(ErrorKind::config, "unit scale must be positive");

    const std::vector<Line> lines = split_lines(text);

    // The MOTION keyword splits the document; everything above is hierarchy.
    std::size_t motion_line = lines.size();
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (trim(lines[i].text) == "MOTION") {
            motion_line = i;
            break;
        }
    }
    if (motion_line == lines.size())
        throw ParseError(lines.empty() ? 1 : lines.back().number, "missing MOTION section");

    const std::size_t hierarchy_end =
        static_cast<std::size_t>(lines[motion_line].text.data() - text.data());
    MotionClip clip;
    clip.root = HierarchyParser(tokenize(text.substr(0, hierarchy_end), 1), unit_scale).parse();

    const std::vector<FlatJoint> flat = flatten(clip.root);
    clip.channel_count = 0;
    for (const FlatJoint &fj : flat)
        clip.channel_count += fj.joint->channels.size();

    std::size_t i = motion_line + 1;
    auto next_nonblank = [&]() -> const Line & {
        while (i < lines.size() && is_blank(lines[i].text))
            ++i;
        if (i >= lines.size())
            throw ParseError(lines.back().number, "unexpected end of MOTION header");
        return lines[i++];
    };

    {
        const Line &l = next_nonblank();
        std::string_view s = trim(l.text);
        if (!s.starts_with("Frames:"))
            throw ParseError(l.number, "expected 'Frames:'");
        s = trim(s.substr(7));
        long long n = -1;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
        if (ec != std::errc{} || ptr != s.data() + s.size() || n < 0)
            throw ParseError(l.number, "invalid frame count '" + std::string(s) + "'");
        clip.frame_count = static_cast<std::size_t>(n);
    }
    {
        const Line &l = next_nonblank();
        std::string_view s = trim(l.text);
        if (!s.starts_with("Frame"))
            throw ParseError(l.number, "expected 'Frame Time:'");
        s = trim(s.substr(5));
        if (!s.starts_with("Time:"))
            throw ParseError(l.number, "expected 'Frame Time:'");
        s = trim(s.substr(5));
        auto v = to_double(s);
        if (!v)
            throw ParseError(l.number, "invalid frame time '" + std::string(s) + "'");
        if (*v <= 0.0)
            throw Error(ErrorKind::structural, "frame time must be positive, got " + std::string(s));
        clip.frame_time = *v;
    }

    clip.frames.reserve(clip.frame_count * clip.channel_count);

    // Column -> whether the value is a translation (scaled to meters).
    std::vector<bool> is_position(clip.channel_count, false);
    for (const FlatJoint &fj : flat)
        for (std::size_t k = 0; k < fj.joint->channels.size(); ++k)
            is_position[fj.channel_offset + k] = !is_rotation(fj.joint->channels[k]);

    std::size_t rows = 0;
    for (; i < lines.size(); ++i) {
        const Line &l = lines[i];
        if (is_blank(l.text))
            continue;
        if (rows == clip.frame_count)
            throw Error(ErrorKind::structural, "line " + std::to_string(l.number) + ": more frame rows than the " +
                                                   std::to_string(clip.frame_count) + " declared");
        std::size_t col = 0;
        for (const Token &t : tokenize(l.text, l.number)) {
            auto v = to_double(t.text);
            if (!v)
                throw ParseError(l.number, "malformed number '" + std::string(t.text) + "'");
            if (col < clip.channel_count)
                clip.frames.push_back(is_position[col] ? *v * unit_scale : *v);
            ++col;
        }
        if (col != clip.channel_count)
            throw Error(ErrorKind::structural, "line " + std::to_string(l.number) + ": frame row has " +
                                                   std::to_string(col) + " values, hierarchy declares " +
                                                   std::to_string(clip.channel_count) + " channels");
        ++rows;
    }
    if (rows != clip.frame_count)
        throw Error(ErrorKind::structural, "declared " + std::to_string(clip.frame_count) + " frames, found " +
                                               std::to_string(rows));
    return clip;
}

MotionClip load_bvh(const std::filesystem::path &path, double unit_scale) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::io, "cannot open BVH file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_bvh(ss.str(), unit_scale);
}

} // namespace wban
