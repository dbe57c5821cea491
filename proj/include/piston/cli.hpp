#pragma once

namespace piston {

int cli(int argc, char** argv);

}  // namespace piston
