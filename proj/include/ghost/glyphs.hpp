#pragma once

#include <string_view>

#include "ghost/pgm.hpp"

namespace ghost {

/// Renders upper-case text in a 5x7 bitmap font as a binary mask image:
/// strokes 255 (open), background 0. Each font pixel becomes a
/// `scale` x `scale` block; `margin` font pixels of background surround the
/// text and one column separates letters. Supported letters:
/// A C E G H I M O S T and space. Throws DomainError for anything else.
GrayImage8 render_text_mask(std::string_view text, std::size_t scale = 1, std::size_t margin = 1);

}  // namespace ghost
