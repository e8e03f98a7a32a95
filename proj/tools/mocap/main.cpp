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


// wban-mocap: writes a synthetic walking or standing BVH clip.

#include <cstdio>
#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "mocap.hpp"
#include "text_io.hpp"

int main(int argc, char **argv) {
    CLI::App app{"Synthetic motion-capture clips (BVH)"};
    app.require_subcommand(1);
    std::string out;
    std::uint64_t seed = 1;
    double duration = 60.0;
    app.add_option("--out,-o", out, "output BVH path")->required();
    app.add_option("--seed", seed, "RNG seed");
    app.add_option("--duration", duration, "clip length, seconds")->check(CLI::PositiveNumber);

    wban::mocap::WalkConfig walk;
    auto *w = app.add_subcommand("walk", "walking gait along +Z");
    w->add_option("--stride", walk.stride_period, "gait cycle period, seconds")->check(CLI::PositiveNumber);
    w->add_option("--speed", walk.speed, "walking speed, m/s");
    w->add_option("--jitter", walk.stride_jitter, "relative stride jitter");
    auto *s = app.add_subcommand("stand", "quiet standing with slow sway");

    CLI11_PARSE(app, argc, argv);
    try {
        wban::MotionClip clip;
        if (w->parsed()) {
            walk.duration = duration;
            walk.seed = seed;
            clip = wban::mocap::walking_clip(walk);
        } else if (s->parsed()) {
            wban::mocap::StandConfig stand;
            stand.duration = duration;
            stand.seed = seed;
            clip = wban::mocap::standing_clip(stand);
        }
        wban::detail::write_text_file(out, wban::mocap::write_bvh(clip));
        std::cerr << "wrote " << clip.frame_count << " frames to " << out << "\n";
    } catch (const std::exception &e) {
        std::cerr << "wban-mocap: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
