#pragma once

namespace rkctl {

[[nodiscard]] const char* version() noexcept;

}  // namespace rkctl
