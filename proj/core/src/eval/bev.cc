// core/src/eval/bev.cc

// Copyright 2026  pedfuse authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "pedfuse/eval/bev.h"

#include <algorithm>
#include <cmath>

namespace pedfuse {

namespace {

constexpr int kCanvasW = 640;
constexpr int kCanvasH = 500;
constexpr double kMarginPx = 40.0;

struct Mapper {
  double scale, cx, cy;
  // Rig frame: x forward (up in the image), y left (left in the image).
  int px(double y_rig) const { return static_cast<int>(std::lround(cx - y_rig * scale)); }
  int py(double x_rig) const { return static_cast<int>(std::lround(cy - x_rig * scale)); }
};

void put_pixel(Image8& img, int x, int y, const uint8_t rgb[3]) {
  if (x < 0 || y < 0 || x >= img.width || y >= img.height) return;
  img.at(y, x, 0) = rgb[0];
  img.at(y, x, 1) = rgb[1];
  img.at(y, x, 2) = rgb[2];
}

void draw_line(Image8& img, int x0, int y0, int x1, int y1,
               const uint8_t rgb[3]) {
  const int dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
  const int sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
  int err = dx + dy;
  for (;;) {
    put_pixel(img, x0, y0, rgb);
    if (x0 == x1 && y0 == y1) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
}

void draw_box(Image8& img, const Mapper& m, const Box3D& box,
              const uint8_t rgb[3]) {
  // BEV rectangle: length along the heading, width across it.
  const double c = std::cos(box.yaw), s = std::sin(box.yaw);
  const double hx = box.size.x / 2, hy = box.size.y / 2;
  double corners[4][2];
  const double local[4][2] = {{hx, hy}, {hx, -hy}, {-hx, -hy}, {-hx, hy}};
  for (int i = 0; i < 4; ++i) {
    corners[i][0] = box.center.x + c * local[i][0] - s * local[i][1];
    corners[i][1] = box.center.y + s * local[i][0] + c * local[i][1];
  }
  for (int i = 0; i < 4; ++i) {
    const int j = (i + 1) % 4;
    draw_line(img, m.px(corners[i][1]), m.py(corners[i][0]),
              m.px(corners[j][1]), m.py(corners[j][0]), rgb);
  }
  // Heading tick from the center to the front edge.
  draw_line(img, m.px(box.center.y), m.py(box.center.x),
            m.px(box.center.y + s * hx), m.py(box.center.x + c * hx), rgb);
}

}  // namespace

Image8 render_bev(const BevContext& ctx, const Box3D& gt, const Box3D& pred) {
  Image8 img;
  img.width = kCanvasW;
  img.height = kCanvasH;
  img.channels = 3;
  img.pixels.assign(static_cast<size_t>(kCanvasW) * kCanvasH * 3, 24);

  Mapper m;
  m.scale = std::min((kCanvasW - 2 * kMarginPx) / ctx.area_y,
                     (kCanvasH - 2 * kMarginPx) / ctx.area_x);
  m.cx = kCanvasW / 2.0;
  m.cy = kCanvasH / 2.0;

  const uint8_t border[3] = {110, 110, 110};
  const uint8_t origin[3] = {230, 230, 230};
  const uint8_t mic[3] = {90, 160, 230};

  const double hx = ctx.area_x / 2, hy = ctx.area_y / 2;
  draw_line(img, m.px(-hy), m.py(-hx), m.px(hy), m.py(-hx), border);
  draw_line(img, m.px(hy), m.py(-hx), m.px(hy), m.py(hx), border);
  draw_line(img, m.px(hy), m.py(hx), m.px(-hy), m.py(hx), border);
  draw_line(img, m.px(-hy), m.py(hx), m.px(-hy), m.py(-hx), border);

  draw_line(img, m.px(0) - 5, m.py(0), m.px(0) + 5, m.py(0), origin);
  draw_line(img, m.px(0), m.py(0) - 5, m.px(0), m.py(0) + 5, origin);

  for (const auto& pos : ctx.mic_positions) {
    const int x = m.px(pos.y), y = m.py(pos.x);
    for (int dy = -2; dy <= 2; ++dy)
      for (int dx = -2; dx <= 2; ++dx) put_pixel(img, x + dx, y + dy, mic);
  }

  draw_box(img, m, gt, kBevGtColor);
  draw_box(img, m, pred, kBevPredColor);  // prediction over ground truth
  return img;
}

void visualize_bev(const BevContext& ctx, const Box3D& gt, const Box3D& pred,
                   const std::string& out_path) {
  write_png(out_path, render_bev(ctx, gt, pred));
}

}  // namespace pedfuse
