#include "ghost/glyphs.hpp"

#include <array>
#include <string>

#include "ghost/core.hpp"

namespace ghost {

namespace {

using Glyph = std::array<const char*, 7>;

const Glyph* glyph_for(char c) {
  static const Glyph a{".###.", "#...#", "#...#", "#####", "#...#", "#...#", "#...#"};
  static const Glyph cc{".###.", "#...#", "#....", "#....", "#....", "#...#", ".###."};
  static const Glyph e{"#####", "#....", "#....", "####.", "#....", "#....", "#####"};
  static const Glyph g{".###.", "#...#", "#....", "#.###", "#...#", "#...#", ".###."};
  static const Glyph h{"#...#", "#...#", "#...#", "#####", "#...#", "#...#", "#...#"};
  static const Glyph i{".###.", "..#..", "..#..", "..#..", "..#..", "..#..", ".###."};
  static const Glyph m{"#...#", "##.##", "#.#.#", "#.#.#", "#...#", "#...#", "#...#"};
  static const Glyph o{".###.", "#...#", "#...#", "#...#", "#...#", "#...#", ".###."};
  static const Glyph s{".###.", "#...#", "#....", ".###.", "....#", "#...#", ".###."};
  static const Glyph t{"#####", "..#..", "..#..", "..#..", "..#..", "..#..", "..#.."};
  static const Glyph space{".....", ".....", ".....", ".....", ".....", ".....", "....."};
  switch (c) {
    case 'A': return &a;
    case 'C': return &cc;
    case 'E': return &e;
    case 'G': return &g;
    case 'H': return &h;
    case 'I': return &i;
    case 'M': return &m;
    case 'O': return &o;
    case 'S': return &s;
    case 'T': return &t;
    case ' ': return &space;
    default: return nullptr;
  }
}

}  // namespace

GrayImage8 render_text_mask(std::string_view text, std::size_t scale, std::size_t margin) {
  if (text.empty()) throw DomainError("render_text_mask: empty text");
  if (scale == 0) throw DomainError("render_text_mask: scale must be positive");
  std::vector<const Glyph*> glyphs;
  for (const char c : text) {
    const Glyph* g = glyph_for(c);
    if (!g) throw DomainError(std::string("render_text_mask: unsupported character '") + c + "'");
    glyphs.push_back(g);
  }
  const std::size_t cols = 2 * margin + 5 * glyphs.size() + (glyphs.size() - 1);
  const std::size_t rows = 2 * margin + 7;
  GrayImage8 img;
  img.width = cols * scale;
  img.height = rows * scale;
  img.pixels.assign(img.width * img.height, 0);
  for (std::size_t k = 0; k < glyphs.size(); ++k) {
    const std::size_t col0 = margin + 6 * k;
    for (std::size_t r = 0; r < 7; ++r) {
      for (std::size_t c = 0; c < 5; ++c) {
        if ((*glyphs[k])[r][c] != '#') continue;
        for (std::size_t dy = 0; dy < scale; ++dy) {
          for (std::size_t dx = 0; dx < scale; ++dx) {
            img.pixels[((margin + r) * scale + dy) * img.width + (col0 + c) * scale + dx] = 255;
          }
        }
      }
    }
  }
  return img;
}

}  // namespace ghost
