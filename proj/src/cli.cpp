namespace piston { int cli(int, char**) { return 0; } }
