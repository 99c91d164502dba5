int b_sym;
