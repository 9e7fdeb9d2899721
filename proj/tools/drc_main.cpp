// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#include "drc/cli/cli.h"

int main(int argc, char **argv) { return drc::cli::run(argc, argv); }
