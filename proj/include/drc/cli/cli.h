// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace drc::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kIoError = 2, kValidation = 3 };

// Entry point of the drc command. Data goes to files (and, for eval, to
// `out`); progress and errors go to `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);
int run(int argc, char **argv);

// SIGINT makes a running render finish its current pass and write output.
void install_interrupt_handler();
bool interrupt_requested();
void clear_interrupt();

// Observer invoked after every render pass, before the interrupt check.
void set_pass_hook(std::function<void(int pass)> hook);

}  // namespace drc::cli
