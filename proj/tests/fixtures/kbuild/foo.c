int foo_sym;
