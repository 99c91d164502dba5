int p_sym;
