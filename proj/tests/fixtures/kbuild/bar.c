int bar_sym;
